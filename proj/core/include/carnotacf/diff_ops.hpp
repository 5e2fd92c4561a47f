#pragma once

#include <functional>

#include "carnotacf/group.hpp"
#include "carnotacf/polynomial.hpp"

namespace carnotacf {

/// Coordinates of a horizontal section with respect to the horizontal frame
/// X_1, ..., X_m of the group.
struct HorizontalSection {
  std::vector<Polynomial> comps;
};

/// X_j u for one horizontal field.
Polynomial apply_field(const VectorFieldSpec& field, const Polynomial& u);

/// (X_1 u, ..., X_m u).
HorizontalSection horizontal_gradient(const CarnotGroup& g, const Polynomial& u);

/// sum_j X_j(X_j u).
Polynomial sub_laplacian(const CarnotGroup& g, const Polynomial& u);

/// sum_j (X_j u)^2, the squared horizontal gradient as an exact polynomial.
Polynomial grad_norm_sq(const CarnotGroup& g, const Polynomial& u);

/// u_r(x) = u(delta_r x) / r for exact rational r > 0.
Polynomial scale_function(const CarnotGroup& g, const Polynomial& u, const Rational& r);

/// u(p o x) as an exact polynomial in x, for a rational base point p.
Polynomial translate(const CarnotGroup& g, const Polynomial& u, const std::vector<Rational>& p);

/// True iff u(-x, -y, t) == -u(x, y, t); defined for three-variable ambient
/// spaces where the first two coordinates span the horizontal layer.
bool check_odd_symmetry(const Polynomial& u);

/// Centered flow differences along the horizontal frame, the numerical
/// counterparts of apply_field and sub_laplacian for black-box functions.
/// The flow of X_j from p is s -> p o (s e_j), exact in exponential
/// coordinates, so the truncation error is O(h^2).
double fd_field_derivative(const CarnotGroup& g, const std::function<double(const Point&)>& f,
                           int field, const Point& p, double h);
double fd_sub_laplacian(const CarnotGroup& g, const std::function<double(const Point&)>& f,
                        const Point& p, double h);

}  // namespace carnotacf
