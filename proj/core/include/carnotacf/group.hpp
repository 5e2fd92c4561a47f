#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnotacf/polynomial.hpp"

namespace carnotacf {

/// A point in exponential coordinates.
using Point = std::vector<double>;

/// Thrown when a closed-form kernel or fundamental solution is evaluated at
/// a pole (the origin, for the supported groups).
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Thrown when an operation needs closed-form gauge geometry and the group
/// does not provide one (step-2 groups loaded from descriptor tables).
struct UnsupportedGroupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One bilinear correction term of a step <= 2 group law:
/// (p o q)_coord += c * p_j * q_k.
struct GroupLawTerm {
  int coord;
  int j;
  int k;
  Rational c;
};

/// Left-invariant horizontal field X_j = d_j + sum_k p_{j,k} d_k, stored as
/// the map k -> p_{j,k} of its non-leading polynomial coefficients.
class VectorFieldSpec {
 public:
  VectorFieldSpec(int index, std::map<int, Polynomial> coeffs)
      : index_(index), coeffs_(std::move(coeffs)) {}

  int index() const { return index_; }
  const std::map<int, Polynomial>& coeffs() const { return coeffs_; }

  /// X_j u, exact.
  Polynomial apply(const Polynomial& u) const;

 private:
  int index_;
  std::map<int, Polynomial> coeffs_;
};

/// Immutable descriptor of a supported Carnot group: Euclidean R^N (N >= 3),
/// the first Heisenberg group, or a user-supplied step-2 table.  All
/// evaluators are pure; instances are safe to share across threads.
class CarnotGroup {
 public:
  enum class Kind { euclidean, heisenberg1, step2 };

  static CarnotGroup euclidean(int n);
  static CarnotGroup heisenberg1();
  /// {"kind": "euclidean", "dim": N} | {"kind": "heisenberg1"} |
  /// {"kind": "step2", "layer_dims": [m1, m2], "fields": ..., "law": ...}.
  static CarnotGroup from_descriptor_json(const std::string& text);
  std::string descriptor_json() const;

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int step() const { return step_; }
  int homogeneous_dim() const { return q_; }
  int horizontal_dim() const { return static_cast<int>(fields_.size()); }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  const std::vector<int>& weights() const { return weights_; }
  const std::vector<VectorFieldSpec>& horizontal_fields() const { return fields_; }
  const std::vector<GroupLawTerm>& law() const { return law_; }
  const std::vector<std::string>& coord_names() const { return names_; }

  /// Closed-form gauge norm, fundamental solution and kernel available.
  bool has_gauge() const { return kind_ != Kind::step2; }

  Point dilate(double lambda, const Point& p) const;
  Point compose(const Point& p, const Point& q) const;
  Point inverse(const Point& p) const;
  std::vector<Rational> compose_exact(const std::vector<Rational>& p,
                                      const std::vector<Rational>& q) const;
  /// Group law applied to polynomial coordinate vectors (shared ambient).
  std::vector<Polynomial> compose_symbolic(const std::vector<Polynomial>& p,
                                           const std::vector<Polynomial>& q) const;

  double gauge_norm(const Point& p) const;

  Polynomial zero_poly() const { return Polynomial::zero(dim_, weights_); }
  Polynomial var_poly(int i) const { return Polynomial::variable(dim_, weights_, i); }
  Polynomial const_poly(const Rational& c) const { return Polynomial::constant(dim_, weights_, c); }

 private:
  CarnotGroup() = default;
  void finish_setup();

  Kind kind_ = Kind::euclidean;
  int dim_ = 0;
  int step_ = 1;
  int q_ = 0;
  std::vector<int> layer_dims_;
  std::vector<int> weights_;
  std::vector<VectorFieldSpec> fields_;
  std::vector<GroupLawTerm> law_;
  std::vector<std::string> names_;
};

/// Exact structural checks: associativity, inverse-by-negation, homogeneity
/// of the field coefficients, and left-invariance of every horizontal field
/// under the stored law.  Throws std::invalid_argument on the first failure.
void verify_group_axioms(const CarnotGroup& g);

}  // namespace carnotacf
