#include <doctest.h>

#include <random>

#include <carnotacf/diff_ops.hpp>
#include <carnotacf/experiments.hpp>

using namespace carnotacf;

namespace {

Polynomial h1_poly(const std::string& expr) {
  const CarnotGroup g = CarnotGroup::heisenberg1();
  return parse_polynomial(expr, g.coord_names(), g.weights());
}

std::vector<Rational> random_rational_point(std::mt19937_64& eng, int n) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  std::vector<Rational> p;
  for (int i = 0; i < n; ++i) p.emplace_back(num(eng), den(eng));
  return p;
}

}  // namespace

TEST_CASE("horizontal fields act as first-order operators") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial u = h1_poly("x - 3*y*t - 2*x^3");
  CHECK(apply_field(h1.horizontal_fields()[0], u) == h1_poly("1 - 6*x^2 - 6*y^2"));
  CHECK(apply_field(h1.horizontal_fields()[1], u) == h1_poly("-3*t + 6*x*y"));
  CHECK(apply_field(h1.horizontal_fields()[0], h1.const_poly(5)).is_zero());
}

TEST_CASE("horizontal gradients") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const HorizontalSection s = horizontal_gradient(h1, h1_poly("t"));
  REQUIRE(s.comps.size() == 2);
  CHECK(s.comps[0] == h1_poly("2*y"));
  CHECK(s.comps[1] == h1_poly("-2*x"));
  CHECK(horizontal_gradient(h1, h1.const_poly(3)).comps[0].is_zero());

  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  const Polynomial u = parse_polynomial("x^2 - y^2", r3.coord_names(), r3.weights());
  const HorizontalSection e = horizontal_gradient(r3, u);
  REQUIRE(e.comps.size() == 3);
  CHECK(e.comps[0] == parse_polynomial("2*x", r3.coord_names(), r3.weights()));
  CHECK(e.comps[1] == parse_polynomial("-2*y", r3.coord_names(), r3.weights()));
  CHECK(e.comps[2].is_zero());
}

TEST_CASE("sub-Laplacian on the reference inputs") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  CHECK(sub_laplacian(h1, h1_poly("x - 3*y*t - 2*x^3")).is_zero());
  CHECK(sub_laplacian(h1, h1_poly("t")).is_zero());
  CHECK(sub_laplacian(h1, h1_poly("x^2 + y^2")) == h1.const_poly(4));
  CHECK(sub_laplacian(h1, h1_poly("x^3")) == h1_poly("6*x"));
  // degree-four harmonic: 2 t^2 - (x^2+y^2)^2
  CHECK(sub_laplacian(h1, h1_poly("2*t^2 - (x^2 + y^2)^2")).is_zero());
}

TEST_CASE("squared gradient closed form of the counterexample") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  CHECK(grad_norm_sq(h1, h1_poly("x - 3*y*t - 2*x^3")) ==
        h1_poly("(1 - 6*x^2 - 6*y^2)^2 + 9*(2*x*y - t)^2"));
  CHECK(grad_norm_sq(h1, h1_poly("t")) == h1_poly("4*(x^2 + y^2)"));
}

TEST_CASE("scaling of functions") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial u = h1_poly("x - 3*y*t - 2*x^3");
  CHECK(scale_function(h1, u, Rational(2)) == h1_poly("x - 12*y*t - 8*x^3"));
  CHECK(scale_function(h1, u, Rational(1)) == u);
  CHECK_THROWS_AS(scale_function(h1, u, Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(scale_function(h1, u, Rational(-1)), std::invalid_argument);

  // (u_r)_s = u_{rs} exactly
  const Rational r(3, 2), s(5, 7);
  CHECK(scale_function(h1, scale_function(h1, u, r), s) == scale_function(h1, u, r * s));

  // gradient identity: grad_G(u_r) = (grad_G u) o delta_r as exact polynomials
  const HorizontalSection lhs = horizontal_gradient(h1, scale_function(h1, u, r));
  const HorizontalSection rhs = horizontal_gradient(h1, u);
  for (int j = 0; j < 2; ++j) CHECK(lhs.comps[j] == rhs.comps[j].dilation_scaled(r));
}

TEST_CASE("translation commutes with the sub-Laplacian") {
  std::mt19937_64 eng(29);
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial u = h1_poly("x - 3*y*t - 2*x^3 + t*x - 1/2*y^2");
  for (int it = 0; it < 10; ++it) {
    const auto p = random_rational_point(eng, 3);
    CHECK(sub_laplacian(h1, translate(h1, u, p)) == translate(h1, sub_laplacian(h1, u), p));
  }
  CHECK(translate(h1, u, {Rational(0), Rational(0), Rational(0)}) == u);

  const CarnotGroup r3 = CarnotGroup::euclidean(3);
  const Polynomial v = parse_polynomial("x*y + z^2", r3.coord_names(), r3.weights());
  const Polynomial shifted = translate(r3, v, {Rational(1), Rational(2), Rational(3)});
  CHECK(shifted == parse_polynomial("(x+1)*(y+2) + (z+3)^2", r3.coord_names(), r3.weights()));
}

TEST_CASE("fields are left-invariant on polynomials") {
  std::mt19937_64 eng(31);
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial u = h1_poly("x^2*t - y*t + x*y^3 - 2*t^2");
  for (int it = 0; it < 10; ++it) {
    const auto p = random_rational_point(eng, 3);
    for (const auto& f : h1.horizontal_fields())
      CHECK(apply_field(f, translate(h1, u, p)) == translate(h1, apply_field(f, u), p));
  }
}

TEST_CASE("dilation covariance of the sub-Laplacian") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const Polynomial u = h1_poly("x^2*t - y*t + x*y^3 - 2*t^2 + x");
  // formal identity in lambda; checked exactly at rationals beyond the degree
  for (const Rational& lam : {Rational(2), Rational(1, 3), Rational(5), Rational(7, 2)}) {
    const Polynomial lhs = sub_laplacian(h1, u.dilation_scaled(lam));
    const Polynomial rhs = sub_laplacian(h1, u).dilation_scaled(lam) * (lam * lam);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("odd symmetry gate") {
  CHECK(check_odd_symmetry(h1_poly("x - 3*y*t - 2*x^3")));
  CHECK(check_odd_symmetry(counterexample_family(1, 1).u));
  CHECK(!check_odd_symmetry(h1_poly("t")));
  CHECK(!check_odd_symmetry(h1_poly("x^2")));
}

TEST_CASE("flow finite differences agree with the symbolic operators") {
  std::mt19937_64 eng(37);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  const CarnotGroup h1 = CarnotGroup::heisenberg1();

  // quartic harmonic: the symbolic sub-Laplacian vanishes, the flow
  // differences must vanish at second order in h
  const Polynomial u4 = h1_poly("2*t^2 - (x^2 + y^2)^2");
  const CompiledPolynomial u4c(u4);
  const auto u4f = [&](const Point& p) { return u4c(p.data()); };
  for (int it = 0; it < 25; ++it) {
    const Point p{c(eng), c(eng), c(eng)};
    const double h = 1e-2;
    const double eh = std::abs(fd_sub_laplacian(h1, u4f, p, h));
    const double eh2 = std::abs(fd_sub_laplacian(h1, u4f, p, h / 2));
    CHECK(eh <= 1e-2);
    if (eh > 1e-10) CHECK(eh / std::max(eh2, 1e-300) >= 3.2);  // order about 2
  }

  // nonharmonic control: the flow differences converge to the symbolic value
  const Polynomial w = h1_poly("x^2*t - y*t^2 + x*y");
  const CompiledPolynomial wc(w);
  const CompiledPolynomial dwc(sub_laplacian(h1, w));
  const auto wf = [&](const Point& p) { return wc(p.data()); };
  for (int it = 0; it < 25; ++it) {
    const Point p{c(eng), c(eng), c(eng)};
    CHECK(fd_sub_laplacian(h1, wf, p, 1e-4) ==
          doctest::Approx(dwc(p.data())).epsilon(1e-5));
    for (int j = 0; j < 2; ++j) {
      const CompiledPolynomial fj(apply_field(h1.horizontal_fields()[j], w));
      CHECK(fd_field_derivative(h1, wf, j, p, 1e-5) ==
            doctest::Approx(fj(p.data())).epsilon(1e-7));
    }
  }
}
