#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace carnotacf {

/// Exact arbitrary-precision rational, the coefficient ring of every
/// symbolic object in the library.
using Rational = boost::multiprecision::cpp_rational;

/// Exponent multi-index, one entry per coordinate.
using Exponents = std::vector<uint32_t>;

/// Largest number of variables the compiled (double) evaluator supports.
inline constexpr int kMaxCompiledVars = 12;

/// Orders monomials by weighted degree first, then lexicographically on the
/// exponent vector.  The weights are the dilation exponents of the ambient
/// group, so the induced iteration order is the canonical one used for
/// deterministic evaluation, printing and serialization.
struct MonomialOrder {
  std::vector<int> weights;

  long degree(const Exponents& e) const {
    long d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += static_cast<long>(weights[i]) * e[i];
    return d;
  }

  bool operator()(const Exponents& a, const Exponents& b) const {
    const long da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Immutable value type: all operations return new polynomials and never
/// store zero coefficients.  Each polynomial carries the dilation weights of
/// its ambient group; mixing polynomials with different variable counts or
/// weights is a programming error and throws.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational, MonomialOrder>;

  static Polynomial zero(int nvars, std::vector<int> weights);
  static Polynomial constant(int nvars, std::vector<int> weights, const Rational& c);
  static Polynomial variable(int nvars, std::vector<int> weights, int index);
  static Polynomial monomial(int nvars, std::vector<int> weights, const Exponents& e,
                             const Rational& c);

  int nvars() const { return nvars_; }
  const std::vector<int>& weights() const { return order_.weights; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial pow(unsigned n) const;

  bool operator==(const Polynomial& rhs) const;
  bool operator!=(const Polynomial& rhs) const { return !(*this == rhs); }

  /// Partial derivative with respect to coordinate `var`.
  Polynomial derivative(int var) const;

  /// Substitutes args[i] for variable i.  All args must share one ambient
  /// space, which becomes the ambient space of the result.
  Polynomial substitute(const std::vector<Polynomial>& args) const;

  /// u(delta_lambda x): coordinate i is scaled by lambda^{w_i}.
  Polynomial dilation_scaled(const Rational& lambda) const;

  /// Flips the sign of the listed variables (x_i -> -x_i).
  Polynomial sign_flipped(const std::vector<int>& vars) const;

  /// Common weighted degree of all monomials, or nullopt when the polynomial
  /// mixes degrees.  The zero polynomial reports degree 0.
  std::optional<long> g_degree() const;

  /// Largest weighted degree present (0 for the zero polynomial).
  long max_g_degree() const;

  /// Exact evaluation; the oracle path used to cross-check the compiled one.
  Rational eval_exact(const std::vector<Rational>& x) const;

  /// Compensated floating evaluation in canonical monomial order.
  double eval(const std::vector<double>& x) const;

  /// Renders in the conventional "x - 3*y*t - 2*x^3" form.
  std::string str(const std::vector<std::string>& names) const;

 private:
  Polynomial(int nvars, std::vector<int> weights);
  void add_term(const Exponents& e, const Rational& c);
  void check_compatible(const Polynomial& rhs) const;

  int nvars_;
  MonomialOrder order_;
  TermMap terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

/// Flattened double-precision view of a polynomial for quadrature-node
/// evaluation.  Terms keep the canonical order; accumulation is compensated,
/// so results are reproducible bit for bit.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  double operator()(const double* x) const;
  double operator()(const std::vector<double>& x) const { return (*this)(x.data()); }
  int nvars() const { return nvars_; }

 private:
  struct Term {
    double coeff;
    std::array<uint8_t, kMaxCompiledVars> exps;
  };
  int nvars_ = 0;
  std::array<uint8_t, kMaxCompiledVars> max_exp_{};
  std::vector<Term> terms_;
};

/// Parses "x - 3*y*t - 2*x^3" style expressions.  Supported grammar:
/// +, -, *, ^ with nonnegative integer exponents, parentheses, integer,
/// fraction (3/4) and decimal (0.25) literals, and the given variable names.
/// Throws std::invalid_argument with a position hint on malformed input.
Polynomial parse_polynomial(const std::string& expr, const std::vector<std::string>& var_names,
                            std::vector<int> weights);

/// JSON array form: [{"coeff": "p/q", "exps": [a, b, c]}, ...].
Polynomial polynomial_from_json_text(const std::string& json_text, int nvars,
                                     std::vector<int> weights);
std::string polynomial_to_json_text(const Polynomial& p);

}  // namespace carnotacf
