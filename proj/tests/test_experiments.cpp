#include <doctest.h>

#include <cmath>
#include <numbers>

#include <carnotacf/experiments.hpp>

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

GaugeGeometry h1_geom() { return GaugeGeometry(CarnotGroup::heisenberg1(), 1.0 / (8 * kPi)); }
GaugeGeometry r3_geom() { return GaugeGeometry(CarnotGroup::euclidean(3), 1.0 / (4 * kPi)); }

}  // namespace

TEST_CASE("family members are built exactly") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const auto names = h1.coord_names();
  CHECK(counterexample_family(1, 0).u ==
        parse_polynomial("x - 3*y*t - 2*x^3", names, h1.weights()));
  CHECK(counterexample_family(0, 1).u ==
        parse_polynomial("y + 3*t*x - 2*y^3", names, h1.weights()));
  const FamilyMember zero = counterexample_family(0, 0);
  CHECK(zero.trivial);
  CHECK(zero.u.is_zero());
  CHECK(!counterexample_family(1, 1).trivial);
}

TEST_CASE("the whole family grid is harmonic; the control is not") {
  std::vector<std::pair<Rational, Rational>> grid{{1, 0}, {0, 1}, {1, 1}, {2, -3},
                                                  {Rational(1, 2), Rational(-2, 7)}};
  for (const auto& cert : verify_family_harmonic(grid)) {
    CHECK(cert.harmonic);
    CHECK(cert.residual.is_zero());
  }
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial control = sub_laplacian(h1, h1.var_poly(0).pow(3));
  CHECK(control == h1.var_poly(0) * Rational(6));
}

TEST_CASE("quartic profile: fit, direct quadrature and closed forms agree") {
  const Resolution res = test_res();
  const GaugeGeometry gh = h1_geom();
  const QuarticProfile prof = quartic_profile(gh, 1, 0, default_fit_radii(), res);

  // closed forms from the adapted-coordinate factorization of the three
  // profile integrals over the unit gauge ball
  const double a0 = kPi / 8.0, a1 = 1.5, a2 = 33.0 * kPi / 32.0;
  CHECK(prof.fit.a0 == doctest::Approx(a0).epsilon(1e-9));
  CHECK(prof.fit.a1 == doctest::Approx(a1).epsilon(1e-9));
  CHECK(prof.fit.a2 == doctest::Approx(a2).epsilon(1e-9));
  CHECK(prof.direct_a0.value == doctest::Approx(a0).epsilon(1e-11));
  CHECK(prof.direct_a1.value == doctest::Approx(a1).epsilon(1e-11));
  CHECK(prof.direct_a2.value == doctest::Approx(a2).epsilon(1e-11));
  CHECK(prof.fit.residual_rms <= 1e-4 * prof.fit.a0);
  CHECK(prof.fit.a1 > 10.0 * prof.fit.a1_sigma);
  CHECK(prof.fit.condition > 0.0);

  // the profile of (3,4) is 25 times the profile of the unit-norm pair
  const QuarticProfile big = quartic_profile(gh, 3, 4, default_fit_radii(), res);
  const QuarticProfile unit =
      quartic_profile(gh, Rational(3, 5), Rational(4, 5), default_fit_radii(), res);
  for (std::size_t i = 0; i < big.scan.values.size(); ++i)
    CHECK(std::abs(big.scan.values[i] - 25.0 * unit.scan.values[i]) <=
          1e-6 * std::abs(big.scan.values[i]));

  CHECK_THROWS_AS(quartic_profile(gh, 0, 0, default_fit_radii(), res), std::invalid_argument);
  CHECK_THROWS_AS(quartic_profile(gh, 1, 0, {0.1, 0.2}, res), std::invalid_argument);
  CHECK_THROWS_AS(quartic_profile(gh, 1, 0, {0.2, 0.4, 0.6, 0.8, 1.5}, res),
                  std::invalid_argument);
}

TEST_CASE("square relation residuals sit inside the error budget") {
  const Resolution res = test_res();
  const GaugeGeometry gh = h1_geom();
  for (const auto& [c1, c2] : std::vector<std::pair<Rational, Rational>>{{1, 0}, {1, 1}}) {
    for (const ResidualCheck& c : j_square_relation(gh, c1, c2, {0.25, 0.5}, res)) {
      CHECK(c.residual <= c.budget);
    }
  }
  CHECK_THROWS_AS(j_square_relation(gh, 0, 0, {0.25}, res), std::invalid_argument);
}

TEST_CASE("square relation gate rejects asymmetric input") {
  const Resolution res = test_res();
  const GaugeGeometry gh = h1_geom();
  // u = t fails u(-x,-y,t) = -u
  CHECK_THROWS_AS(j_square_relation(gh, gh.group().var_poly(2), {0.25}, res),
                  std::invalid_argument);
}

TEST_CASE("euclidean scans come out increasing") {
  const Resolution res = test_res();
  const GaugeGeometry ge = r3_geom();
  const CarnotGroup& g = ge.group();
  const std::vector<double> radii{0.2, 0.4, 0.6, 0.8, 1.0};

  const Polynomial uq = parse_polynomial("x^2 - y^2 + x", g.coord_names(), g.weights());
  CHECK(euclidean_increasing(ge, uq, radii, res).report.classification ==
        MonotonicityReport::Trend::increasing);

  const Polynomial cubic = parse_polynomial("x*y*z", g.coord_names(), g.weights());
  const ScanWithReport sw = euclidean_increasing(ge, cubic, radii, res);
  CHECK(sw.report.classification == MonotonicityReport::Trend::increasing);
  for (std::size_t i = 0; i < radii.size(); ++i)
    CHECK(sw.scan.values[i] == doctest::Approx(std::pow(radii[i], 4) / 30.0).epsilon(1e-9));

  // affine input: constant profile, flat within error
  const ScanWithReport flat = euclidean_increasing(ge, g.var_poly(0), radii, res);
  for (double v : flat.scan.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));

  const Polynomial bad = parse_polynomial("x^3", g.coord_names(), g.weights());
  CHECK_THROWS_AS(euclidean_increasing(ge, bad, radii, res), std::invalid_argument);
}

TEST_CASE("vertical-coordinate remark checks out") {
  const Resolution res = test_res();
  const GaugeGeometry gh = h1_geom();
  const VtRemarkResult r = remark_v_t_check(gh, 100, 1e-3, default_fit_radii(), res, 12345);
  CHECK(r.max_rel_err <= 1e-4);
  CHECK(r.observed_order >= 1.8);
  CHECK(r.helper_identity_err <= 1e-4);
  CHECK(r.scan.report.classification == MonotonicityReport::Trend::increasing);

  // spot values of the target: 32 at (1,0,0), 0 on the axis
  const CarnotGroup& g = gh.group();
  const Point p{1, 0, 0};
  const auto g4 = [&](const Point& q) {
    const double n = g.gauge_norm(q);
    return 4.0 * n * n;
  };
  CHECK(fd_sub_laplacian(g, g4, p, 1e-3) == doctest::Approx(32.0).epsilon(1e-5));
  CHECK(std::abs(fd_sub_laplacian(g, g4, {0, 0, 1}, 1e-3)) <= 1e-5);
}

TEST_CASE("default radii grid") {
  const auto radii = default_fit_radii();
  REQUIRE(radii.size() == 10);
  CHECK(radii.front() == doctest::Approx(0.05));
  CHECK(radii.back() == doctest::Approx(0.5));
}
