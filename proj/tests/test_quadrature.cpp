#include <doctest.h>

#include <cmath>
#include <numbers>

#include <carnotacf/diff_ops.hpp>
#include <carnotacf/functionals.hpp>
#include <carnotacf/gauge.hpp>
#include <carnotacf/quadrature.hpp>

using namespace carnotacf;

namespace {

const double kPi = std::numbers::pi;

Resolution test_res() {
  Resolution res;
  res.radial_nodes = 24;
  res.angular_nodes_phi = 24;
  res.angular_nodes_theta = 48;
  res.t_nodes = 16;
  return res;
}

const Integrand kOne{[](const Point&) { return 1.0; }, 0.0};

}  // namespace

TEST_CASE("solid integrals against closed forms") {
  const Resolution res = test_res();
  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  const Integrand inv_norm{[&](const Point& p) { return 1.0 / r3.gauge_norm(p); }, -1.0};
  const QuadEstimate q = solid_integral(r3, inv_norm, 1.0, res);
  CHECK(q.value == doctest::Approx(2.0 * kPi).epsilon(1e-10));
  CHECK(q.abs_error < 1e-8);
  CHECK(q.converged);

  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  CHECK(solid_integral(h1, kOne, 1.0, res).value ==
        doctest::Approx(kPi * kPi / 2).epsilon(1e-12));

  // fractional singular weight exercises the radial substitution:
  // integral of N^{-5/2} over D(0,1) = angular measure * 2/3 = 4 pi^2 / 3
  const Integrand frac{[&](const Point& p) { return std::pow(h1.gauge_norm(p), -2.5); }, -2.5};
  CHECK(solid_integral(h1, frac, 1.0, res).value ==
        doctest::Approx(4.0 * kPi * kPi / 3.0).epsilon(1e-8));

  const Integrand bad{[](const Point&) { return 1.0; }, -4.0};
  CHECK_THROWS_AS(solid_integral(h1, bad, 1.0, res), std::invalid_argument);
  CHECK_THROWS_AS(solid_integral(h1, kOne, -1.0, res), std::invalid_argument);
}

TEST_CASE("sphere integrals and the chart") {
  const Resolution res = test_res();
  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  CHECK(sphere_integral(r3, kOne, 1.0, res).value == doctest::Approx(4.0 * kPi).epsilon(1e-12));

  // every node the chart produces lies on the gauge sphere to 1e-12
  for (const CarnotGroup& g : {CarnotGroup::heisenberg1(), CarnotGroup::euclidean(3)}) {
    for (double r : {0.5, 1.0, 2.0}) {
      double max_dev = 0.0;
      Integrand probe{[&](const Point& p) {
                        max_dev = std::max(max_dev, std::abs(g.gauge_norm(p) - r));
                        return 1.0;
                      },
                      0.0};
      long n = 0;
      sphere_value(g, probe, r, res, n);
      CHECK(max_dev <= 1e-12 * std::max(1.0, r));
    }
  }
}

TEST_CASE("kernel mass is one on every sphere after normalization") {
  const Resolution res = test_res();
  for (const CarnotGroup& g : {CarnotGroup::heisenberg1(), CarnotGroup::euclidean(3)}) {
    const GaugeGeometry geom = GaugeGeometry::normalized(g, res);
    const Integrand mass{[&](const Point& p) { return geom.kernel(p); }, 0.0};
    for (double r : {0.5, 1.0, 2.0})
      CHECK(sphere_integral(g, mass, r, res).value == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("thin-shell coarea oracle agrees with the sphere rule") {
  const Resolution res = test_res();
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand w{[&](const Point& p) { return 1.0 + p[0] * p[0] + geom.gamma(p); }, 0.0};
  for (double r : {0.5, 1.0}) {
    const QuadEstimate sphere = sphere_integral(h1, w, r, res);
    const QuadEstimate shell = thin_shell_integral(h1, w, r, 1e-3 * r, res);
    // the shell average carries an eps^2 curvature bias the node-doubling
    // bars cannot see; with eps = 1e-3 r it stays below 4e-6 of the value
    CHECK(std::abs(sphere.value - shell.value) <=
          sphere.abs_error + shell.abs_error + 4e-6 * std::abs(sphere.value));
  }
  // the bias shrinks quadratically in the shell width
  {
    const QuadEstimate sphere = sphere_integral(h1, w, 1.0, res);
    const double wide = std::abs(thin_shell_integral(h1, w, 1.0, 4e-3, res).value - sphere.value);
    const double thin = std::abs(thin_shell_integral(h1, w, 1.0, 1e-3, res).value - sphere.value);
    CHECK(wide / thin > 12.0);  // about 16
  }
}

TEST_CASE("coarea consistency residuals") {
  const Resolution res = test_res();
  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  // centered differencing of (4/3) pi r^3 leaves exactly (4 pi / 3) dr^2
  CHECK(coarea_consistency(r3, kOne, 1.0, 1e-3, res) <=
        1.01 * (4.0 * kPi / 3.0) * 1e-6 + 1e-9);
  CHECK(coarea_consistency(r3, kOne, 1.0, 2e-4, res) <= 1e-6);

  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  CHECK(coarea_consistency(h1, kOne, 1.0, 1e-3, res) <= 1e-4);
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand gamma{[&](const Point& p) { return geom.gamma(p); }, -2.0};
  CHECK(coarea_consistency(h1, gamma, 1.0, 1e-3, res) <= 1e-6);
}

TEST_CASE("masked integrals partition exactly") {
  const Resolution res = test_res();
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial mask =
      parse_polynomial("x - 3*y*t - 2*x^3", h1.coord_names(), h1.weights());
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand f{[&](const Point& p) { return geom.gamma(p) * (1.0 + p[2] * p[2]); }, -2.0};

  long n = 0;
  const double plus = masked_solid_value(h1, f, mask, PartSelector::plus, 0.8, res, n);
  const double minus = masked_solid_value(h1, f, mask, PartSelector::minus, 0.8, res, n);
  const double whole = masked_solid_value(h1, f, mask, PartSelector::whole, 0.8, res, n);
  CHECK(std::abs(plus + minus - whole) <= 1e-12 * std::abs(whole));

  const double sp = masked_sphere_value(h1, f, mask, PartSelector::plus, 0.8, res, n);
  const double sm = masked_sphere_value(h1, f, mask, PartSelector::minus, 0.8, res, n);
  const double sw = masked_sphere_value(h1, f, mask, PartSelector::whole, 0.8, res, n);
  CHECK(std::abs(sp + sm - sw) <= 1e-12 * std::abs(sw));

  // whole-selector masked and plain rules integrate the same measure
  const QuadEstimate plain = solid_integral(h1, f, 0.8, res);
  const QuadEstimate masked = masked_solid_integral(h1, f, mask, PartSelector::whole, 0.8, res);
  CHECK(masked.value == doctest::Approx(plain.value).epsilon(1e-10));
}

TEST_CASE("monte carlo rejection agrees with the deterministic rules") {
  const Resolution res = test_res();
  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  const QuadEstimate mc = mc_rejection_solid(r3, kOne, 1.0, 200000, 42);
  CHECK(std::abs(mc.value - 4.0 * kPi / 3.0) <= 3.0 * mc.abs_error);

  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const QuadEstimate det = solid_integral(h1, kOne, 1.0, res);
  const QuadEstimate mch = mc_rejection_solid(h1, kOne, 1.0, 200000, 42);
  CHECK(std::abs(det.value - mch.value) <= 3.0 * mch.abs_error + det.abs_error);

  // stratified shells handle the singular weight
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand gamma{[&](const Point& p) { return geom.gamma(p); }, -2.0};
  const QuadEstimate strat = mc_stratified_solid(h1, gamma, 1.0, 400000, 42);
  CHECK(strat.converged);
  CHECK(std::abs(strat.value - kPi / 8.0) <= 3.0 * strat.abs_error);

  // reproducibility: same seed, bit-identical; different seed, different stream
  const QuadEstimate again = mc_rejection_solid(h1, kOne, 1.0, 200000, 42);
  CHECK(mch.value == again.value);
  CHECK(mch.abs_error == again.abs_error);
  CHECK(mc_rejection_solid(h1, kOne, 1.0, 200000, 43).value != mch.value);

  // zero acceptances raise the failure flag
  bool saw_failure = false;
  for (uint64_t seed = 0; seed < 64 && !saw_failure; ++seed) {
    const QuadEstimate tiny = mc_rejection_solid(h1, kOne, 1.0, 1, seed);
    if (!tiny.converged) {
      saw_failure = true;
      CHECK(tiny.value == 0.0);
    }
  }
  CHECK(saw_failure);
}

TEST_CASE("deterministic reruns are bit identical") {
  const Resolution res = test_res();
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand f{[&](const Point& p) { return geom.gamma(p) * (p[0] * p[0] + 1.0); }, -2.0};
  const QuadEstimate a = solid_integral(h1, f, 0.7, res);
  const QuadEstimate b = solid_integral(h1, f, 0.7, res);
  CHECK(a.value == b.value);
  CHECK(a.abs_error == b.abs_error);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("reported error bars cover the next refinement") {
  Resolution res;
  res.radial_nodes = 12;
  res.angular_nodes_phi = 12;
  res.angular_nodes_theta = 24;

  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  const GaugeGeometry gh(h1, 1.0 / (8 * kPi));
  const GaugeGeometry ge(r3, 1.0 / (4 * kPi));

  struct Entry {
    const CarnotGroup* g;
    Integrand f;
  };
  const Polynomial ce =
      parse_polynomial("x - 3*y*t - 2*x^3", h1.coord_names(), h1.weights());
  const CompiledPolynomial gsq = CompiledPolynomial(
      grad_norm_sq(h1, ce));
  const std::vector<Entry> corpus{
      {&h1, Integrand{[](const Point&) { return 1.0; }, 0.0}},
      {&h1, Integrand{[&](const Point& p) { return gh.gamma(p); }, -2.0}},
      {&h1, Integrand{[&](const Point& p) { return (p[0] * p[0] + p[1] * p[1]) * gh.gamma(p); },
                      0.0}},
      {&h1, Integrand{[&](const Point& p) { return gsq(p.data()) * gh.gamma(p); }, -2.0}},
      {&h1, Integrand{[&](const Point& p) { const double n = h1.gauge_norm(p); return n * n; },
                      0.0}},
      {&h1, Integrand{[&](const Point& p) { return p[2] * p[2] * gh.gamma(p); }, 0.0}},
      {&h1, Integrand{[&](const Point& p) { return 1.0 / (1.0 + h1.gauge_norm(p)); }, 0.0}},
      {&r3, Integrand{[](const Point&) { return 1.0; }, 0.0}},
      {&r3, Integrand{[&](const Point& p) { return 1.0 / r3.gauge_norm(p); }, -1.0}},
      {&r3, Integrand{[&](const Point& p) { return p[0] * p[0] * ge.gamma(p); }, -1.0}},
  };
  for (const Entry& e : corpus) {
    const QuadEstimate est = solid_integral(*e.g, e.f, 1.0, res);
    long n = 0;
    const double finer = solid_value(*e.g, e.f, 1.0, res.doubled().doubled(), n);
    CHECK(std::abs(est.value - finer) <= est.abs_error + 1e-14 * std::abs(est.value));
  }
}

TEST_CASE("energy at radius r equals the scaled-function energy at radius one") {
  const Resolution res = test_res();
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Polynomial u = parse_polynomial("x - 3*y*t - 2*x^3", h1.coord_names(), h1.weights());
  const std::vector<Rational> x0(3, Rational(0));
  for (const Rational& r : {Rational(1, 2), Rational(1, 4), Rational(2)}) {
    const double rd = r.convert_to<double>();
    const double lhs = acf_j_tilde(geom, u, x0, rd, PartSelector::whole, res).value;
    const double rhs =
        acf_j_tilde(geom, scale_function(h1, u, r), x0, 1.0, PartSelector::whole, res).value;
    CHECK(std::abs(lhs - rhs) <= 1e-6 * std::abs(lhs));
  }
}

TEST_CASE("declared singular exponents are honest near the origin") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const GaugeGeometry geom(h1, 1.0 / (8 * kPi));
  const Integrand gamma{[&](const Point& p) { return geom.gamma(p); }, -2.0};
  // f * N^{-alpha} must stay bounded as N drops to 1e-2, 1e-3
  for (double n : {1e-2, 1e-3}) {
    const Point p = h1.dilate(n, {0.6, 0.48, 0.2});
    const double bounded = gamma.f(p) * std::pow(h1.gauge_norm(p), -gamma.singular_exponent);
    CHECK(std::abs(bounded) <= 1.0);
  }
}

TEST_CASE("resolution json round trip rejects unknown keys") {
  Resolution res;
  res.radial_nodes = 20;
  res.seed = 99;
  const Resolution back = Resolution::from_json_text(res.to_json_text());
  CHECK(back == res);
  CHECK_THROWS_AS(Resolution::from_json_text("{\"radial\": 3}"), std::invalid_argument);
  CHECK_THROWS_AS(Resolution::from_json_text("{\"radial_nodes\": 0}"), std::invalid_argument);
}
