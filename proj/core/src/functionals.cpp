#include "carnotacf/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace carnotacf {

std::string trend_name(MonotonicityReport::Trend t) {
  switch (t) {
    case MonotonicityReport::Trend::increasing:
      return "increasing";
    case MonotonicityReport::Trend::decreasing:
      return "decreasing";
    case MonotonicityReport::Trend::mixed:
      return "mixed";
    case MonotonicityReport::Trend::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

QuadEstimate mean_value(const GaugeGeometry& geom, const std::function<double(const Point&)>& u,
                        const Point& x0, double r, const Resolution& res) {
  const CarnotGroup& g = geom.group();
  if (static_cast<int>(x0.size()) != g.dim())
    throw std::invalid_argument("center dimension mismatch");
  Integrand w{[&](const Point& xi) { return u(g.compose(x0, xi)) * geom.kernel(xi); }, 0.0};
  auto at = [&](const Resolution& rr, long& n) { return sphere_value(g, w, r, rr, n); };
  QuadEstimate q = estimate_by_doubling(at, res, "");
  q.scheme = "mean-value[nphi=" + std::to_string(res.angular_nodes_phi) +
             ",nth=" + std::to_string(res.angular_nodes_theta) + "]";
  return q;
}

namespace {

std::vector<Rational> origin(const CarnotGroup& g) {
  return std::vector<Rational>(g.dim(), Rational(0));
}

/// Translated function, its squared horizontal gradient and the Gamma-
/// weighted energy integrand shared by the solid-side functionals.
struct TranslatedEnergy {
  Polynomial shifted;
  Polynomial grad_sq;
  CompiledPolynomial grad_sq_eval;
  const GaugeGeometry* geom;
  int q;

  TranslatedEnergy(const GaugeGeometry& gg, const Polynomial& u, const std::vector<Rational>& x0)
      : shifted(translate(gg.group(), u, x0)),
        grad_sq(grad_norm_sq(gg.group(), shifted)),
        grad_sq_eval(grad_sq),
        geom(&gg),
        q(gg.group().homogeneous_dim()) {}

  Integrand gamma_weighted() const {
    const double c = geom->gamma_constant();
    const int qq = q;
    const CompiledPolynomial& gs = grad_sq_eval;
    const CarnotGroup& g = geom->group();
    return Integrand{[&g, &gs, c, qq](const Point& p) {
                       return gs(p.data()) * c * std::pow(g.gauge_norm(p), 2 - qq);
                     },
                     static_cast<double>(2 - q)};
  }

  /// Surface integrand of the representation side with |grad_G N|^2 already
  /// cancelled: |grad_G u|^2 * c_Q (Q-2) N^{1-Q} / |grad N|.
  Integrand reduced_surface() const {
    const CompiledPolynomial& gs = grad_sq_eval;
    const GaugeGeometry* gm = geom;
    return Integrand{[gm, &gs](const Point& p) { return gs(p.data()) * gm->kernel_reduced(p); },
                     0.0};
  }
};

double masked_energy_value(const CarnotGroup& g, const TranslatedEnergy& en, PartSelector sel,
                           double r, const Resolution& res, long& evals) {
  const Integrand f = en.gamma_weighted();
  return masked_solid_value(g, f, en.shifted, sel, r, res, evals) / (r * r);
}

double repr_factor_value(const CarnotGroup& g, const TranslatedEnergy& en, PartSelector sel,
                         double r, const Resolution& res, long& evals) {
  const Integrand w = en.reduced_surface();
  const GaussNodes t = gauss_on_interval(res.t_nodes, 0.0, 1.0);
  const int q = g.homogeneous_dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i)
    acc += t.w[i] * t.x[i] *
           masked_sphere_value(g, w, en.shifted, sel, t.x[i] * r, res, evals);
  return acc / (q - 2);
}

}  // namespace

QuadEstimate acf_j_tilde(const GaugeGeometry& geom, const Polynomial& u,
                         const std::vector<Rational>& x0, double r, SignedPartSelector sel,
                         const Resolution& res) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const TranslatedEnergy en(geom, u, x0);
  auto at = [&](const Resolution& rr, long& n) {
    return masked_energy_value(geom.group(), en, sel, r, rr, n);
  };
  QuadEstimate q = estimate_by_doubling(at, res, "");
  q.scheme = "acf-j-tilde[nr=" + std::to_string(res.radial_nodes) +
             ",nphi=" + std::to_string(res.angular_nodes_phi) +
             ",nth=" + std::to_string(res.angular_nodes_theta) + "]";
  return q;
}

QuadEstimate acf_j(const GaugeGeometry& geom, const Polynomial& u,
                   const std::vector<Rational>& x0, double r, const Resolution& res) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const TranslatedEnergy en(geom, u, x0);
  auto at = [&](const Resolution& rr, long& n) {
    const double plus = masked_energy_value(geom.group(), en, PartSelector::plus, r, rr, n);
    const double minus = masked_energy_value(geom.group(), en, PartSelector::minus, r, rr, n);
    return plus * minus;
  };
  QuadEstimate q = estimate_by_doubling(at, res, "");
  q.scheme = "acf-j[nr=" + std::to_string(res.radial_nodes) +
             ",nphi=" + std::to_string(res.angular_nodes_phi) +
             ",nth=" + std::to_string(res.angular_nodes_theta) + "]";
  return q;
}

QuadEstimate acf_j_representation(const GaugeGeometry& geom, const Polynomial& u,
                                  const std::vector<Rational>& x0, double r,
                                  const Resolution& res) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const TranslatedEnergy en(geom, u, x0);
  auto at = [&](const Resolution& rr, long& n) {
    const double plus = repr_factor_value(geom.group(), en, PartSelector::plus, r, rr, n);
    const double minus = repr_factor_value(geom.group(), en, PartSelector::minus, r, rr, n);
    return plus * minus;
  };
  QuadEstimate q = estimate_by_doubling(at, res, "");
  q.scheme = "acf-j-repr[nt=" + std::to_string(res.t_nodes) +
             ",nphi=" + std::to_string(res.angular_nodes_phi) +
             ",nth=" + std::to_string(res.angular_nodes_theta) + "]";
  return q;
}

QuadEstimate acf_j_tilde_representation(const GaugeGeometry& geom, const Polynomial& u,
                                        const std::vector<Rational>& x0, double r,
                                        const Resolution& res) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const TranslatedEnergy en(geom, u, x0);
  auto at = [&](const Resolution& rr, long& n) {
    return repr_factor_value(geom.group(), en, PartSelector::whole, r, rr, n);
  };
  QuadEstimate q = estimate_by_doubling(at, res, "");
  q.scheme = "acf-j-tilde-repr[nt=" + std::to_string(res.t_nodes) +
             ",nphi=" + std::to_string(res.angular_nodes_phi) +
             ",nth=" + std::to_string(res.angular_nodes_theta) + "]";
  return q;
}

MonotonicityReport scan_monotonicity(const RadialScan& scan) {
  const std::size_t n = scan.values.size();
  if (n < 3 || scan.radii.size() != n || scan.errors.size() != n)
    throw std::invalid_argument("scan needs at least three consistent grid points");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(scan.radii[i] < scan.radii[i + 1]) || !(scan.radii[i] > 0.0))
      throw std::invalid_argument("scan radii must be positive and strictly increasing");
  for (double e : scan.errors)
    if (e < 0.0) throw std::invalid_argument("scan errors must be nonnegative");

  MonotonicityReport rep;
  bool any_up = false, any_down = false, any_flat = false;
  int first_flat = -1, first_up = -1, first_down = -1;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = scan.values[i + 1] - scan.values[i];
    const double gate = scan.errors[i] + scan.errors[i + 1];
    margin = std::min(margin, std::abs(d) - gate);
    if (d > gate) {
      any_up = true;
      if (first_up < 0) first_up = static_cast<int>(i);
    } else if (d < -gate) {
      any_down = true;
      if (first_down < 0) first_down = static_cast<int>(i);
    } else {
      any_flat = true;
      if (first_flat < 0) first_flat = static_cast<int>(i);
    }
  }
  rep.confidence_margin = margin;
  if (any_up && !any_down && !any_flat) {
    rep.classification = MonotonicityReport::Trend::increasing;
  } else if (any_down && !any_up && !any_flat) {
    rep.classification = MonotonicityReport::Trend::decreasing;
  } else if (any_up && any_down) {
    rep.classification = MonotonicityReport::Trend::mixed;
    rep.first_violation = (first_up < first_down) ? first_down : first_up;
  } else {
    rep.classification = MonotonicityReport::Trend::inconclusive;
    rep.first_violation = first_flat;
  }
  return rep;
}

ScalingIdentityCheck scaling_identity_check(const GaugeGeometry& geom, const Polynomial& u,
                                            const Rational& r, const Resolution& res) {
  if (r <= 0) throw std::invalid_argument("scaling radius must be positive");
  const auto x0 = origin(geom.group());
  const QuadEstimate lhs = acf_j(geom, u, x0, r.convert_to<double>(), res);
  const Polynomial ur = scale_function(geom.group(), u, r);
  const QuadEstimate rhs = acf_j(geom, ur, x0, 1.0, res);
  ScalingIdentityCheck out;
  out.residual = std::abs(lhs.value - rhs.value);
  out.budget = lhs.abs_error + rhs.abs_error + 1e-12 * (std::abs(lhs.value) + 1.0);
  return out;
}

FunctionalKind functional_kind_from_name(const std::string& name) {
  if (name == "j") return FunctionalKind::j;
  if (name == "j_tilde") return FunctionalKind::j_tilde;
  if (name == "mean_value") return FunctionalKind::mean_value;
  if (name == "j_repr") return FunctionalKind::j_repr;
  throw std::invalid_argument("unknown functional: " + name);
}

std::string functional_kind_name(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::j:
      return "j";
    case FunctionalKind::j_tilde:
      return "j_tilde";
    case FunctionalKind::mean_value:
      return "mean_value";
    case FunctionalKind::j_repr:
      return "j_repr";
  }
  return "j_tilde";
}

RadialScan scan_functional(const GaugeGeometry& geom, const Polynomial& u,
                           const std::vector<Rational>& x0, const std::vector<double>& radii,
                           FunctionalKind kind, const Resolution& res) {
  RadialScan scan;
  const CompiledPolynomial ueval(u);
  Point x0d(geom.group().dim());
  for (int i = 0; i < geom.group().dim(); ++i) x0d[i] = x0[i].convert_to<double>();
  for (double r : radii) {
    QuadEstimate q;
    switch (kind) {
      case FunctionalKind::j:
        q = acf_j(geom, u, x0, r, res);
        break;
      case FunctionalKind::j_tilde:
        q = acf_j_tilde(geom, u, x0, r, PartSelector::whole, res);
        break;
      case FunctionalKind::mean_value:
        q = mean_value(
            geom, [&](const Point& p) { return ueval(p.data()); }, x0d, r, res);
        break;
      case FunctionalKind::j_repr:
        q = acf_j_representation(geom, u, x0, r, res);
        break;
    }
    scan.radii.push_back(r);
    scan.values.push_back(q.value);
    scan.errors.push_back(q.abs_error);
    if (scan.scheme.empty()) scan.scheme = q.scheme;
  }
  return scan;
}

}  // namespace carnotacf
