#pragma once

#include <functional>

#include "carnotacf/diff_ops.hpp"
#include "carnotacf/gauge.hpp"
#include "carnotacf/quadrature.hpp"

namespace carnotacf {

using SignedPartSelector = PartSelector;

/// A functional sampled on a radius grid, with per-point error bars.
struct RadialScan {
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> errors;
  std::string scheme;
};

struct MonotonicityReport {
  enum class Trend { increasing, decreasing, mixed, inconclusive };
  Trend classification = Trend::inconclusive;
  /// Index of the first consecutive difference breaking the reported trend
  /// (or sitting inside the error band), -1 when none.
  int first_violation = -1;
  /// min over i of |v_{i+1} - v_i| - (e_i + e_{i+1}); a trend is only
  /// asserted when this clears zero.
  double confidence_margin = 0.0;
};

std::string trend_name(MonotonicityReport::Trend t);

/// Intrinsic mean value of u on the gauge sphere of radius r around x0,
/// computed by translating to the origin (exact for the kernel measure).
QuadEstimate mean_value(const GaugeGeometry& geom, const std::function<double(const Point&)>& u,
                        const Point& x0, double r, const Resolution& res);

/// (1/r^2) * integral over D(x0,r) of |grad_G u|^2 1_{sel} Gamma.  The
/// whole selector runs through the same mask-split nodes, so plus and minus
/// add up to whole exactly.
QuadEstimate acf_j_tilde(const GaugeGeometry& geom, const Polynomial& u,
                         const std::vector<Rational>& x0, double r, SignedPartSelector sel,
                         const Resolution& res);

/// Product of the plus and minus Gamma-weighted energies over r^4.
QuadEstimate acf_j(const GaugeGeometry& geom, const Polynomial& u,
                   const std::vector<Rational>& x0, double r, const Resolution& res);

/// Right-hand side of the representation identity: the product over the
/// signed parts of 1/(Q-2) * int_0^1 t M_{tr}((|grad_G u^{+-}| / |grad_G N|)^2)(0) dt.
/// The sphere integrand is pre-simplified so |grad_G N|^2 cancels; nothing
/// is divided by the horizontal gradient norm.
QuadEstimate acf_j_representation(const GaugeGeometry& geom, const Polynomial& u,
                                  const std::vector<Rational>& x0, double r,
                                  const Resolution& res);

/// Single-factor form of the identity (whole gradient, no signed parts).
QuadEstimate acf_j_tilde_representation(const GaugeGeometry& geom, const Polynomial& u,
                                        const std::vector<Rational>& x0, double r,
                                        const Resolution& res);

/// Classifies a scan by consecutive differences gated on error bars.
MonotonicityReport scan_monotonicity(const RadialScan& scan);

struct ScalingIdentityCheck {
  double residual = 0.0;
  double budget = 0.0;  // combined quadrature error of the two sides
};

/// |J_u(r) - J_{u_r}(1)| with both sides quadratured independently.
ScalingIdentityCheck scaling_identity_check(const GaugeGeometry& geom, const Polynomial& u,
                                            const Rational& r, const Resolution& res);

enum class FunctionalKind { j, j_tilde, mean_value, j_repr };

FunctionalKind functional_kind_from_name(const std::string& name);
std::string functional_kind_name(FunctionalKind k);

RadialScan scan_functional(const GaugeGeometry& geom, const Polynomial& u,
                           const std::vector<Rational>& x0, const std::vector<double>& radii,
                           FunctionalKind kind, const Resolution& res);

}  // namespace carnotacf
