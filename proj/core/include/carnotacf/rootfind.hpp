#pragma once

#include <utility>
#include <vector>

#include "carnotacf/polynomial.hpp"

namespace carnotacf {

/// Real roots of sum_k c[k] s^k inside [lo, hi], ascending.  Bisection
/// between the critical points of the derivative; tangential (even-order)
/// roots are detected by a scale-aware residual test.  Meant for the
/// low-degree restrictions that arise when sign-masking integrands.
std::vector<double> poly_real_roots(const std::vector<double>& coeffs, double lo, double hi);

/// Horner evaluation of sum_k c[k] s^k.
double poly_eval(const std::vector<double>& coeffs, double s);

/// Flattened double view of a polynomial, precomputed once per masked
/// integral so the per-circle restrictions stay cheap.
struct PolyTermsView {
  int nvars = 0;
  std::vector<std::pair<double, Exponents>> terms;

  PolyTermsView() = default;
  explicit PolyTermsView(const Polynomial& p);
};

/// Sign breakpoints of u restricted to the circle
///   x_cos = amplitude * cos(theta), x_sin = amplitude * sin(theta),
/// with every other coordinate frozen at base[]; returns the roots as theta
/// values in (-pi, pi), ascending.  Uses the half-angle substitution
/// w = tan(theta/2), which turns the restriction into an ordinary
/// polynomial in w.
std::vector<double> circle_sign_breakpoints(const PolyTermsView& u, int cos_index, int sin_index,
                                            double amplitude, const std::vector<double>& base);

}  // namespace carnotacf
