#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mckean/roots.hpp"

using namespace mckean;

TEST_CASE("horner evaluation and exact derivatives") {
  const Poly p({1.0, -2.0, 0.0, 3.0});  // 1 - 2x + 3x^3
  CHECK(p.degree() == 3);
  CHECK(p(2.0) == doctest::Approx(21.0));
  CHECK(p.derivative() == Poly({-2.0, 0.0, 9.0}));
  CHECK(p.derivative(3) == Poly({18.0}));
  CHECK(p.derivative(4).is_zero());
  CHECK(p.integral().derivative() == p);
  CHECK(p.integral()(0.0) == 0.0);
}

TEST_CASE("trailing zeros are trimmed") {
  const Poly p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK((Poly({0.0, 0.0, 1.0}) - Poly({0.0, 0.0, 1.0})).is_zero());
}

TEST_CASE("taylor shift and argument scaling") {
  const Poly p({0.0, 0.0, -0.5, 0.0, 0.25});
  const Poly q = p.shifted(-1.0);  // p(x - 1)
  for (double x : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
    CHECK(q(x) == doctest::Approx(p(x - 1.0)).epsilon(1e-14));
    CHECK(p.scaled_argument(2.0)(x) == doctest::Approx(p(2.0 * x)).epsilon(1e-14));
  }
}

TEST_CASE("products and parity") {
  const Poly a({1.0, 1.0}), b({-1.0, 1.0});
  CHECK(a * b == Poly({-1.0, 0.0, 1.0}));
  CHECK((a * b).is_even());
  CHECK(Poly({0.0, 1.0, 0.0, 2.0}).is_odd());
  CHECK_FALSE(a.is_even());
}

TEST_CASE("even polynomial rejects odd coefficients and low degree") {
  CHECK_NOTHROW(EvenPolynomial(Poly({0.0, 0.0, 1.0})));
  CHECK_THROWS_AS(EvenPolynomial(Poly({0.0, 1e-3, 1.0})), Error);
  CHECK_THROWS_AS(EvenPolynomial(Poly({1.0})), Error);
  try {
    EvenPolynomial(Poly({0.0, 1.0, 1.0}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidPolynomial);
  }
}

TEST_CASE("real roots with multiplicity") {
  // (x - 1)^2 (x + 2) x = x^4 - 3x^2 + 2x
  const auto r = real_roots(Poly({0.0, 2.0, -3.0, 0.0, 1.0}));
  REQUIRE(r.size() == 3);
  CHECK(r[0].x == doctest::Approx(-2.0));
  CHECK(r[1].x == 0.0);
  CHECK(r[2].x == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r[2].multiplicity == 2);
  CHECK(real_roots(Poly({1.0, 0.0, 1.0})).empty());
}

TEST_CASE("double well critical points") {
  const auto c = critical_points(Poly({0.0, 0.0, -0.5, 0.0, 0.25}));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(-1.0));
  CHECK(c[1] == doctest::Approx(0.0));
  CHECK(c[2] == doctest::Approx(1.0));
}

TEST_CASE("minimum and nonnegativity on intervals") {
  const double inf = std::numeric_limits<double>::infinity();
  const Poly p({0.0, 0.0, -0.5, 0.0, 0.25});
  const PolyMinimum m = minimize_on(p, -inf, inf);
  CHECK(m.bounded);
  CHECK(m.value == doctest::Approx(-0.25));
  CHECK_FALSE(minimize_on(Poly({0.0, 1.0}), -inf, inf).bounded);
  CHECK(minimize_on(Poly({0.0, 1.0}), 2.0, 3.0).x == 2.0);
  CHECK(nonnegative_on(Poly({0.0, 0.0, 3.0}), -inf, inf));  // double root at 0
  CHECK(nonnegative_on(Poly({0.0, 6.0}), 0.0, inf));
  CHECK_FALSE(nonnegative_on(Poly({0.0, 6.0}), -inf, inf));
  CHECK_FALSE(nonnegative_on(Poly({-1e-3, 0.0, 1.0}), -inf, inf));
}

TEST_CASE("cauchy bound contains every root") {
  const Poly p({6.0, -5.0, 1.0});  // roots 2 and 3
  for (double r : real_root_values(p)) CHECK(std::abs(r) <= root_bound(p));
}
