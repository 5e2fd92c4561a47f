#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <carnotacf/diff_ops.hpp>
#include <carnotacf/gauge.hpp>
#include <carnotacf/quadrature.hpp>

using namespace carnotacf;

namespace {
const double kPi = std::numbers::pi;

Point random_point_with_norm(const CarnotGroup& g, std::mt19937_64& eng, double lo, double hi) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), tgt(lo, hi);
  for (;;) {
    Point p(g.dim());
    for (double& v : p) v = u(eng);
    const double n = g.gauge_norm(p);
    if (n < 1e-3) continue;
    return g.dilate(tgt(eng) / n, p);
  }
}
}  // namespace

TEST_CASE("dilations scale coordinates by their weights") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Point p = h1.dilate(2.0, {1.0, 1.0, 1.0});
  CHECK(p == Point{2.0, 2.0, 4.0});
  const Point q = h1.dilate(1.0, {0.3, -0.2, 0.9});
  CHECK(q == Point{0.3, -0.2, 0.9});
  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  CHECK(r3.dilate(3.0, {1.0, 0.0, -1.0}) == Point{3.0, 0.0, -3.0});
  CHECK_THROWS_AS(h1.dilate(0.0, {1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(h1.dilate(-2.0, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("the stored law composes points as forced by left-invariance") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  // value derived from the left-invariance oracle below, not assumed
  CHECK(h1.compose({1, 0, 0}, {0, 1, 0}) == Point{1.0, 1.0, -2.0});

  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 20; ++it) {
    Point p{u(eng), u(eng), u(eng)};
    const Point e = h1.compose(p, h1.inverse(p));
    for (double v : e) CHECK(std::abs(v) < 1e-14);
  }

  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  CHECK(r3.compose({1, 2, 3}, {4, 5, 6}) == Point{5.0, 7.0, 9.0});
  CHECK_THROWS_AS(h1.compose({1, 0}, {0, 1, 0}), std::invalid_argument);
}

TEST_CASE("group axioms verify symbolically") {
  verify_group_axioms(CarnotGroup::heisenberg1());
  verify_group_axioms(CarnotGroup::euclidean(3));
  verify_group_axioms(CarnotGroup::euclidean(5));
}

TEST_CASE("horizontal field coefficients have the required homogeneity") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  for (const auto& f : h1.horizontal_fields())
    for (const auto& [k, p] : f.coeffs()) CHECK(p.g_degree() == h1.weights()[k] - 1);
}

TEST_CASE("descriptor json round trip and step2 tables") {
  const CarnotGroup h1 = CarnotGroup::from_descriptor_json("{\"kind\": \"heisenberg1\"}");
  CHECK(h1.homogeneous_dim() == 4);
  CHECK(h1.layer_dims() == std::vector<int>{2, 1});
  const CarnotGroup r4 = CarnotGroup::from_descriptor_json(
      CarnotGroup::euclidean(4).descriptor_json());
  CHECK(r4.dim() == 4);
  CHECK_THROWS_AS(CarnotGroup::from_descriptor_json("{\"kind\":\"euclidean\",\"dim\":2}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      CarnotGroup::from_descriptor_json("{\"kind\":\"heisenberg1\",\"extra\":1}"),
      std::invalid_argument);

  // heisenberg1 spelled out as an explicit step-2 table
  const std::string step2 = R"({
    "kind": "step2", "layer_dims": [2, 1],
    "law": [{"coord": 2, "j": 1, "k": 0, "c": "2"},
            {"coord": 2, "j": 0, "k": 1, "c": "-2"}],
    "fields": [
      [{"coord": 2, "poly": [{"coeff": "2", "exps": [0, 1, 0]}]}],
      [{"coord": 2, "poly": [{"coeff": "-2", "exps": [1, 0, 0]}]}]
    ]})";
  const CarnotGroup g2 = CarnotGroup::from_descriptor_json(step2);
  CHECK(g2.homogeneous_dim() == 4);
  CHECK(!g2.has_gauge());
  CHECK_THROWS_AS(g2.gauge_norm({1, 0, 0}), UnsupportedGroupError);
  const Polynomial u = g2.var_poly(0) * g2.var_poly(0) - g2.var_poly(1) * g2.var_poly(1);
  CHECK(sub_laplacian(g2, u).is_zero());

  // a law that does not leave the declared fields invariant is rejected
  const std::string bad = R"({
    "kind": "step2", "layer_dims": [2, 1],
    "law": [{"coord": 2, "j": 1, "k": 0, "c": "-2"},
            {"coord": 2, "j": 0, "k": 1, "c": "2"}],
    "fields": [
      [{"coord": 2, "poly": [{"coeff": "2", "exps": [0, 1, 0]}]}],
      [{"coord": 2, "poly": [{"coeff": "-2", "exps": [1, 0, 0]}]}]
    ]})";
  CHECK_THROWS_AS(CarnotGroup::from_descriptor_json(bad), std::invalid_argument);
}

TEST_CASE("gauge norm values and homogeneity") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  CHECK(h1.gauge_norm({1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h1.gauge_norm({0, 0, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h1.gauge_norm({0, 0, 0}) == 0.0);

  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 100; ++it) {
    Point p{u(eng), u(eng), u(eng)};
    for (double lam : {0.5, 2.0, 10.0}) {
      CHECK(h1.gauge_norm(h1.dilate(lam, p)) ==
            doctest::Approx(lam * h1.gauge_norm(p)).epsilon(1e-13));
    }
  }
}

TEST_CASE("squared-gradient identities of the gauge norm are polynomial facts") {
  // With P = N^4 = (x^2+y^2)^2 + t^2:  |grad_G P|^2 = 16 (x^2+y^2) P and
  // |grad P|^2 = 16 (x^2+y^2)^3 + 4 t^2, which pin the closed forms used by
  // the evaluators.
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial x = h1.var_poly(0), y = h1.var_poly(1), t = h1.var_poly(2);
  const Polynomial rho2 = x * x + y * y;
  const Polynomial big_p = rho2 * rho2 + t * t;
  CHECK(grad_norm_sq(h1, big_p) == rho2 * big_p * Rational(16));
  Polynomial full = Polynomial::zero(3, h1.weights());
  for (int i = 0; i < 3; ++i) full = full + big_p.derivative(i) * big_p.derivative(i);
  CHECK(full == rho2 * rho2 * rho2 * Rational(16) + t * t * Rational(4));

  std::mt19937_64 eng(9);
  for (int it = 0; it < 50; ++it) {
    const Point p = random_point_with_norm(h1, eng, 0.3, 2.0);
    const double n = h1.gauge_norm(p);
    const double rho_sq = p[0] * p[0] + p[1] * p[1];
    CHECK(gauge_grad_horiz_sq(h1, p) == doctest::Approx(rho_sq / (n * n)).epsilon(1e-12));
    const double expected_full =
        std::sqrt(rho_sq * rho_sq * rho_sq + 0.25 * p[2] * p[2]) / (n * n * n);
    CHECK(gauge_grad_full_len(h1, p) == doctest::Approx(expected_full).epsilon(1e-12));
  }
}

TEST_CASE("fundamental solution and kernel closed forms") {
  Resolution res;
  res.radial_nodes = 24;
  res.angular_nodes_phi = 24;
  res.angular_nodes_theta = 48;

  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  const double c3 = fix_gamma_constant(r3, res);
  CHECK(c3 == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
  GaugeGeometry ge(r3, c3);
  CHECK(ge.gamma({2, 0, 0}) == doctest::Approx(c3 / 2.0).epsilon(1e-14));
  for (double r : {0.5, 1.0, 2.0})
    CHECK(ge.kernel({r, 0, 0}) == doctest::Approx(1.0 / (4.0 * kPi * r * r)).epsilon(1e-13));

  const CarnotGroup r4 = CarnotGroup::euclidean(4);
  CHECK(fix_gamma_constant(r4, res) ==
        doctest::Approx(1.0 / (4.0 * kPi * kPi)).epsilon(1e-11));

  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const double cq = fix_gamma_constant(h1, res);
  // forced by the normalization integral, which reduces to 2 sin(phi)
  CHECK(cq == doctest::Approx(1.0 / (8.0 * kPi)).epsilon(1e-12));
  GaugeGeometry gh(h1, cq);
  CHECK(gh.gamma({0, 0, 1}) == doctest::Approx(cq).epsilon(1e-14));
  CHECK(gh.kernel({0, 0, 1}) == 0.0);  // horizontal gradient vanishes on the axis
  CHECK(gh.kernel({1, 0, 0}) > 0.0);

  std::mt19937_64 eng(13);
  for (int it = 0; it < 30; ++it) {
    const Point p = random_point_with_norm(h1, eng, 0.4, 2.0);
    for (double lam : {0.5, 2.0})
      CHECK(gh.gamma(h1.dilate(lam, p)) ==
            doctest::Approx(gh.gamma(p) / (lam * lam)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(gh.gamma({0, 0, 0}), SingularityError);
  CHECK_THROWS_AS(gh.kernel({0, 0, 0}), SingularityError);
  CHECK_THROWS_AS(ge.gamma({0, 0, 0}), SingularityError);

  // doubling the constant doubles the kernel mass
  GaugeGeometry doubled(h1, 2.0 * cq);
  long n = 0;
  Integrand mass{[&](const Point& p) { return doubled.kernel(p); }, 0.0};
  CHECK(sphere_value(h1, mass, 1.0, res, n) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("kernel normalization is stable across resolutions") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  Resolution lo;
  lo.radial_nodes = 16;
  lo.angular_nodes_phi = 16;
  lo.angular_nodes_theta = 32;
  const double a = fix_gamma_constant(h1, lo);
  const double b = fix_gamma_constant(h1, lo.doubled());
  CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
}

TEST_CASE("the fundamental solution is harmonic away from the pole") {
  std::mt19937_64 eng(17);
  for (const CarnotGroup& g : {CarnotGroup::heisenberg1(), CarnotGroup::euclidean(3)}) {
    GaugeGeometry geom(g, 1.0);
    const auto gamma_fn = [&](const Point& p) { return geom.gamma(p); };
    std::vector<double> orders;
    const double h = 1e-2;
    for (int it = 0; it < 100; ++it) {
      const Point p = random_point_with_norm(g, eng, 0.5, 2.0);
      const double eh = std::abs(fd_sub_laplacian(g, gamma_fn, p, h));
      const double eh2 = std::abs(fd_sub_laplacian(g, gamma_fn, p, h / 2));
      orders.push_back(std::log2(eh / std::max(eh2, 1e-300)));
    }
    std::sort(orders.begin(), orders.end());
    CHECK(orders[orders.size() / 2] >= 1.8);
  }
}

TEST_CASE("solid gauge-ball measure scales like r^Q") {
  Resolution res;
  res.radial_nodes = 24;
  res.angular_nodes_phi = 24;
  res.angular_nodes_theta = 48;
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Integrand one{[](const Point&) { return 1.0; }, 0.0};
  long n = 0;
  const double v1 = solid_value(h1, one, 1.0, res, n);
  CHECK(v1 == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
  for (double r : {0.5, 1.7}) {
    const double vr = solid_value(h1, one, r, res, n);
    CHECK(std::abs(vr - std::pow(r, 4) * v1) <= 1e-6 * std::abs(vr));
  }
}
