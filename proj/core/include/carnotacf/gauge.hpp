#pragma once

#include "carnotacf/group.hpp"

namespace carnotacf {

struct Resolution;

/// Gauge norm gradients with no dependence on the fundamental-solution
/// constant.  All throw SingularityError at the origin and
/// UnsupportedGroupError when the group has no closed-form gauge.
std::vector<double> gauge_grad_full(const CarnotGroup& g, const Point& p);
double gauge_grad_full_len(const CarnotGroup& g, const Point& p);
double gauge_grad_horiz_sq(const CarnotGroup& g, const Point& p);

/// Closed-form fundamental solution Gamma = c_Q N^{2-Q} and the mean-value
/// kernel K = |grad_G Gamma|^2 / |grad Gamma| for a fixed constant c_Q.
///
/// The kernel is evaluated through the identity
///   |grad_G Gamma| = c_Q (Q-2) N^{1-Q} |grad_G N|,
/// so K = c_Q (Q-2) N^{1-Q} |grad_G N|^2 / |grad N|; nothing is ever divided
/// by the horizontal gradient norm, which vanishes on the center axis.
class GaugeGeometry {
 public:
  GaugeGeometry(CarnotGroup group, double c_q);

  /// Fixes c_Q by kernel normalization (unit kernel mass on the unit gauge
  /// sphere) at the given quadrature resolution.
  static GaugeGeometry normalized(const CarnotGroup& group, const Resolution& res);

  const CarnotGroup& group() const { return group_; }
  double gamma_constant() const { return c_q_; }

  double norm(const Point& p) const { return group_.gauge_norm(p); }
  double gamma(const Point& p) const;
  double grad_gamma_len(const Point& p) const;
  double kernel(const Point& p) const;

  /// c_Q (Q-2) N^{1-Q} / |grad N|: the kernel with |grad_G N|^2 divided out,
  /// the surface weight of the pre-simplified representation integrand.
  double kernel_reduced(const Point& p) const;

 private:
  CarnotGroup group_;
  double c_q_;
};

/// c_Q such that the kernel has unit mass on every gauge sphere; the library
/// normalizes on the unit sphere and the r-independence is a test surface.
double fix_gamma_constant(const CarnotGroup& g, const Resolution& res);

}  // namespace carnotacf
