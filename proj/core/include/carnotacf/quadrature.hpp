#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "carnotacf/group.hpp"

namespace carnotacf {

/// Deterministic node counts plus the Monte-Carlo budget.  The same block is
/// accepted everywhere an integral is computed; error estimates come from a
/// rerun with doubled deterministic counts.
struct Resolution {
  int radial_nodes = 48;
  int angular_nodes_phi = 48;
  int angular_nodes_theta = 96;
  int t_nodes = 32;
  long mc_samples = 200000;
  uint64_t seed = 20260810;

  Resolution doubled() const;
  static Resolution from_json_text(const std::string& text);
  std::string to_json_text() const;
  bool operator==(const Resolution&) const = default;
};

/// Value of an integral together with an error estimate (refinement
/// difference for deterministic schemes, one standard error for Monte
/// Carlo), the evaluation count and a scheme tag.
struct QuadEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  std::string scheme;
  bool converged = true;

  std::string to_json_text() const;
};

/// Pointwise integrand.  `singular_exponent` is the declared alpha with
/// f * N^{-alpha} bounded near the origin; solid rules use it to pick the
/// radial treatment and reject non-integrable inputs (alpha <= -Q).
struct Integrand {
  std::function<double(const Point&)> f;
  double singular_exponent = 0.0;
};

enum class PartSelector { plus, minus, whole };

/// Integral of f over the gauge ball D(0,r).  Adapted coordinates
/// p = delta_s(omega(angles)) with open Gauss rules; for fractional radial
/// weights the radial variable is substituted so the transformed integrand
/// is regular.
QuadEstimate solid_integral(const CarnotGroup& g, const Integrand& f, double r,
                            const Resolution& res);

/// Integral of w over the gauge sphere dD(0,r) against the Euclidean
/// surface measure, via the analytic chart.
QuadEstimate sphere_integral(const CarnotGroup& g, const Integrand& w, double r,
                             const Resolution& res);

/// Solid integral of f restricted to {mask > 0} (plus), {mask <= 0} (minus)
/// or everything (whole).  The integration circles of the chart are split
/// exactly at the sign changes of the mask, so plus + minus equals whole on
/// identical nodes.
QuadEstimate masked_solid_integral(const CarnotGroup& g, const Integrand& f,
                                   const Polynomial& mask, PartSelector sel, double r,
                                   const Resolution& res);
QuadEstimate masked_sphere_integral(const CarnotGroup& g, const Integrand& w,
                                    const Polynomial& mask, PartSelector sel, double r,
                                    const Resolution& res);

/// |d/dr solid(f, r) - sphere(f / |grad N|, r)| with a centered difference;
/// the contract is O(dr^2) plus quadrature error.
double coarea_consistency(const CarnotGroup& g, const Integrand& f, double r, double dr,
                          const Resolution& res);

/// (1 / 2 eps) * integral of f |grad N| over the shell r-eps < N < r+eps;
/// converges to the sphere integral of f and serves as its independent
/// cross-check.
QuadEstimate thin_shell_integral(const CarnotGroup& g, const Integrand& f, double r, double eps,
                                 const Resolution& res);

/// Rejection Monte Carlo over the bounding box of D(0,r); unbiased, with
/// one standard error reported and bitwise reproducibility per seed.
QuadEstimate mc_rejection_solid(const CarnotGroup& g, const Integrand& f, double r, long samples,
                                uint64_t seed);

/// Shell-stratified variant for integrands with a singular weight at the
/// origin (geometric shells N in (r 2^{-k-1}, r 2^{-k}]).
QuadEstimate mc_stratified_solid(const CarnotGroup& g, const Integrand& f, double r, long samples,
                                 uint64_t seed, int shells = 18);

/// Raw single-resolution values behind the estimates above; composite
/// functionals build their own refinement pairs from these.
double solid_value(const CarnotGroup& g, const Integrand& f, double r, const Resolution& res,
                   long& evals);
double sphere_value(const CarnotGroup& g, const Integrand& w, double r, const Resolution& res,
                    long& evals);
double masked_solid_value(const CarnotGroup& g, const Integrand& f, const Polynomial& mask,
                          PartSelector sel, double r, const Resolution& res, long& evals);
double masked_sphere_value(const CarnotGroup& g, const Integrand& w, const Polynomial& mask,
                           PartSelector sel, double r, const Resolution& res, long& evals);

/// value = at(res.doubled()), abs_error = |value - at(res)|; shared protocol
/// for every deterministic QuadEstimate in the library.
QuadEstimate estimate_by_doubling(const std::function<double(const Resolution&, long&)>& at,
                                  const Resolution& res, const std::string& scheme);

/// Gauss-Legendre nodes and weights mapped to (a, b).
struct GaussNodes {
  std::vector<double> x, w;
};
GaussNodes gauss_on_interval(int n, double a, double b);

}  // namespace carnotacf
