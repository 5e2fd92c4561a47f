#pragma once

#include <utility>

#include "carnotacf/functionals.hpp"

namespace carnotacf {

struct FamilyMember {
  Polynomial u;
  bool trivial;  // c1 = c2 = 0
};

/// u = c1 x + c2 y + 3 t (c2 x - c1 y) - 2 (c1 x^3 + c2 y^3), exact.
FamilyMember counterexample_family(const Rational& c1, const Rational& c2);

struct HarmonicCertificate {
  Rational c1, c2;
  bool harmonic;
  Polynomial residual;
};

std::vector<HarmonicCertificate> verify_family_harmonic(
    const std::vector<std::pair<Rational, Rational>>& grid);

/// Coefficients of a0 - a1 r^2 + a2 r^4 fitted by least squares in the
/// basis (1, r^2, r^4), with per-coefficient uncertainties from the error
/// bars, an rms residual and a condition diagnostic of the normal matrix.
struct QuarticFit {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double a0_sigma = 0.0, a1_sigma = 0.0, a2_sigma = 0.0;
  double residual_rms = 0.0;
  double condition = 0.0;
};

QuarticFit fit_quartic(const RadialScan& scan);

struct QuarticProfile {
  RadialScan scan;
  QuarticFit fit;
  QuadEstimate direct_a0, direct_a1, direct_a2;
};

/// Samples the single-factor energy of a family member on the radius grid,
/// fits the quartic profile, and independently quadratures the three
/// profile coefficients over the unit ball.
QuarticProfile quartic_profile(const GaugeGeometry& h1, const Rational& c1, const Rational& c2,
                               const std::vector<double>& radii, const Resolution& res);

struct ResidualCheck {
  double r = 0.0;
  double residual = 0.0;
  double budget = 0.0;
};

/// |J(r) - (1/4) Jt(r)^2| per radius, gated on the odd symmetry
/// u(-x,-y,t) = -u(x,y,t); rejects asymmetric input.
std::vector<ResidualCheck> j_square_relation(const GaugeGeometry& h1, const Polynomial& u,
                                             const std::vector<double>& radii,
                                             const Resolution& res);
std::vector<ResidualCheck> j_square_relation(const GaugeGeometry& h1, const Rational& c1,
                                             const Rational& c2, const std::vector<double>& radii,
                                             const Resolution& res);

struct ScanWithReport {
  RadialScan scan;
  MonotonicityReport report;
};

/// Scan of (c_N / r^2) int_{B(0,r)} |grad u|^2 / |xi|^{N-2} for an exactly
/// harmonic u in R^N; rejects non-harmonic input.
ScanWithReport euclidean_increasing(const GaugeGeometry& euclid, const Polynomial& u,
                                    const std::vector<double>& radii, const Resolution& res);

struct VtRemarkResult {
  double max_rel_err = 0.0;        // finite differences vs 32 (x^2+y^2)/N^2 at step h
  double observed_order = 0.0;     // median convergence order under h -> h/2
  double helper_identity_err = 0.0;  // |grad_G N|^2 closed form vs flow derivatives
  ScanWithReport scan;             // single-factor energy of v = t
};

/// Checks the closed-form subharmonicity computation for v = t by finite
/// differences along the horizontal flows, plus the companion radial scan.
VtRemarkResult remark_v_t_check(const GaugeGeometry& h1, int npoints, double h,
                                const std::vector<double>& radii, const Resolution& res,
                                uint64_t seed);

/// {0.05, 0.10, ..., 0.50}
std::vector<double> default_fit_radii();

struct ClaimResult {
  std::string claim_id;
  std::string anchor;
  std::string status;  // pass | fail | inconclusive
  std::string values_json;
  std::string errors_json;
};

struct ReproduceOptions {
  Resolution res;
  double debug_cq_scale = 1.0;  // sensitivity hook: corrupts the kernel constant
  std::string out_dir;
};

/// Runs the full claim suite, writes one CSV per scan plus claims.json into
/// out_dir, and returns the per-claim verdicts.
std::vector<ClaimResult> run_reproduction(const ReproduceOptions& opt);

}  // namespace carnotacf
