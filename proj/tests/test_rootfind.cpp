#include <doctest.h>

#include <cmath>

#include <carnotacf/group.hpp>
#include <carnotacf/rootfind.hpp>

using namespace carnotacf;

TEST_CASE("real roots of low-degree polynomials") {
  // (s - 0.3)(s - 0.7) = s^2 - s + 0.21
  auto r = poly_real_roots({0.21, -1.0, 1.0}, 0.0, 1.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.7).epsilon(1e-12));

  // tangential double root (s - 0.5)^2
  r = poly_real_roots({0.25, -1.0, 1.0}, 0.0, 1.0);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-9));

  // cubic with roots at 0.1, 0.5, 0.9
  const double a = 0.1, b = 0.5, c = 0.9;
  r = poly_real_roots({-a * b * c, a * b + a * c + b * c, -(a + b + c), 1.0}, 0.0, 1.0);
  REQUIRE(r.size() == 3);
  CHECK(r[1] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(poly_real_roots({1.0}, 0.0, 1.0).empty());
  CHECK(poly_real_roots({1.0, 0.0, 1.0}, -1.0, 1.0).empty());  // s^2 + 1
  // linear root outside the window is dropped
  CHECK(poly_real_roots({-2.0, 1.0}, 0.0, 1.0).empty());
}

TEST_CASE("circle restrictions find every sign change") {
  const CarnotGroup h1 = CarnotGroup::heisenberg1();
  const auto names = h1.coord_names();

  // u = x on the unit circle: sign changes at +-pi/2
  {
    const Polynomial u = h1.var_poly(0);
    const auto brk = circle_sign_breakpoints(PolyTermsView(u), 0, 1, 1.0, {0.0, 0.0, 0.0});
    REQUIRE(brk.size() == 2);
    CHECK(brk[0] == doctest::Approx(-M_PI / 2).epsilon(1e-12));
    CHECK(brk[1] == doctest::Approx(M_PI / 2).epsilon(1e-12));
  }

  // u = t restricted to a circle is constant: no breakpoints
  {
    const Polynomial u = h1.var_poly(2);
    CHECK(circle_sign_breakpoints(PolyTermsView(u), 0, 1, 0.7, {0.0, 0.0, 0.3}).empty());
  }

  // the counterexample on a generic chart circle: every breakpoint is a root
  {
    const Polynomial u = parse_polynomial("x - 3*y*t - 2*x^3", names, h1.weights());
    const CompiledPolynomial uc(u);
    const double amp = 0.8, tval = 0.41;
    const auto brk =
        circle_sign_breakpoints(PolyTermsView(u), 0, 1, amp, {0.0, 0.0, tval});
    CHECK(!brk.empty());
    for (double th : brk) {
      const double p[3] = {amp * std::cos(th), amp * std::sin(th), tval};
      CHECK(std::abs(uc(p)) <= 1e-9);
    }
    // odd symmetry pairs the roots at distance pi
    REQUIRE(brk.size() % 2 == 0);
  }
}
