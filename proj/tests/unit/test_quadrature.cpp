#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "mckean/error.hpp"
#include "mckean/model.hpp"
#include "mckean/quadrature.hpp"

using namespace mckean;

namespace {

// Midpoint sum on [lo, hi]: the independent oracle for tilted wells.
double riemann_moment(const Poly& W, double eps, int k, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x = lo + (i + 0.5) * h;
    const double w = std::exp(-2.0 * W(x) / eps);
    num += w * std::pow(x, k);
    den += w;
  }
  return num / den;
}

QuadratureOptions tanh_sinh() {
  QuadratureOptions o;
  o.rule = QuadratureRule::tanh_sinh;
  return o;
}

}  // namespace

TEST_CASE("gaussian normalization and moments") {
  const Poly W({0.0, 0.0, 0.5});
  for (double eps : {1e-3, 0.1, 0.25, 1.0}) {
    CHECK(gibbs_log_norm(W, eps) == doctest::Approx(0.5 * std::log(std::numbers::pi * eps)).epsilon(1e-12));
    CHECK(std::abs(gibbs_moment(W, eps, 1)) <= 1e-15);
    CHECK(gibbs_moment(W, eps, 2) == doctest::Approx(eps / 2.0).epsilon(1e-11));
  }
}

TEST_CASE("constant shift factors out of the log norm") {
  const Poly W({0.0, 0.0, 0.5});
  for (double eps : {0.05, 0.25}) {
    CHECK(gibbs_log_norm(W + Poly::constant(7.0), eps) ==
          doctest::Approx(0.5 * std::log(std::numbers::pi * eps) - 14.0 / eps).epsilon(1e-12));
  }
  // No overflow for min W far from 0 on the eps scale.
  const double eps = 1e-3;
  const Poly V = quartic_double_well();
  const double base = gibbs_log_norm(V, eps);
  for (double c : {-1e6 * eps, 1e6 * eps}) {
    const double shifted = gibbs_log_norm(V + Poly::constant(c), eps);
    CHECK(std::isfinite(shifted));
    CHECK(std::abs(shifted - (base - 2.0 * c / eps)) <= 1e-12 * std::abs(2.0 * c / eps));
  }
}

TEST_CASE("double well: the two rule families agree") {
  const Poly V = quartic_double_well();
  const double gl = gibbs_log_norm(V, 0.25);
  const double ts = gibbs_log_norm(V, 0.25, tanh_sinh());
  CHECK(std::abs(std::exp(gl - ts) - 1.0) <= 1e-10);
  CHECK(gl == doctest::Approx(2.3442382197296).epsilon(1e-12));
}

TEST_CASE("tilted double well mean against a dense Riemann sum") {
  const Poly W = quartic_double_well() + Poly({0.0, -0.5});
  const double oracle = riemann_moment(W, 0.25, 1, -6.0, 6.0, 1000000);
  CHECK(std::abs(gibbs_moment(W, 0.25, 1) - oracle) <= 1e-8);
}

TEST_CASE("expectation is linear in f") {
  const Poly W = quartic_double_well() + Poly({0.0, -0.3});
  const double eps = 0.2;
  CHECK(gibbs_expectation(W, eps, Poly({1.0})) == doctest::Approx(1.0).epsilon(1e-14));
  const double m1 = gibbs_moment(W, eps, 1);
  CHECK(std::abs(gibbs_expectation(W, eps, Poly({-m1, 1.0}))) <= 1e-14);
  CHECK(gibbs_expectation(Poly({0.0, 0.0, 0.5}), eps, Poly({0.0, 0.0, 1.0})) == doctest::Approx(eps / 2.0));
}

TEST_CASE("translation covariance of moments") {
  const Poly W({0.0, 0.3, -1.0, 0.1, 0.5});
  const double eps = 0.3, c = 0.7;
  const Eigen::VectorXd base = gibbs_moments(W, eps, 4);
  const Eigen::VectorXd moved = gibbs_moments(W.shifted(-c), eps, 4);  // W(x - c)
  for (int k = 0; k <= 4; ++k) {
    // E[(X + c)^k] by the binomial theorem.
    double expect = 0.0, binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      expect += binom * base(j) * std::pow(c, k - j);
      binom = binom * (k - j) / (j + 1);
    }
    CHECK(std::abs(moved(k) - expect) <= 1e-9);
  }
}

TEST_CASE("enlarging the truncation radius changes nothing") {
  const Poly W = quartic_double_well() + Poly({0.0, 0.2});
  QuadratureOptions wide;
  wide.radius_scale = 1.25;
  for (double eps : {1e-3, 0.1, 1.0}) {
    const Eigen::VectorXd a = gibbs_moments(W, eps, 4), b = gibbs_moments(W, eps, 4, wide);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(a(k) - b(k)) <= 1e-10 * std::max(1.0, std::abs(a(k))));
    CHECK(std::abs(gibbs_log_norm(W, eps) - gibbs_log_norm(W, eps, wide)) <= 1e-10);
  }
}

TEST_CASE("randomized polynomials: rule families within 10x tolerance") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> le(std::log(1e-3), 0.0);
  for (int i = 0; i < 40; ++i) {
    const int deg = 2 * (1 + static_cast<int>(rng() % 5));  // 2..10
    Eigen::VectorXd c(deg + 1);
    for (int j = 0; j <= deg; ++j) c(j) = u(rng);
    c(deg) = 0.1 + std::abs(u(rng));
    const Poly W(c);
    const double eps = std::exp(le(rng));
    const GibbsIntegrals gl = gibbs_integrals(W, eps, 2);
    const GibbsIntegrals ts = gibbs_integrals(W, eps, 2, tanh_sinh());
    CAPTURE(W.to_string());
    CAPTURE(eps);
    CHECK(std::abs(gl.shifted(0) / ts.shifted(0) - 1.0) <= 1e-9);
    const double ref = std::max(1.0, std::abs(gl.moments()(2)));
    CHECK(std::abs(gl.moments()(1) - ts.moments()(1)) <= 1e-9 * ref);
    CHECK(std::abs(gl.moments()(2) - ts.moments()(2)) <= 1e-9 * ref);
  }
}

TEST_CASE("non-confining potentials are refused") {
  for (const Poly& W : {Poly({0.0, 0.0, -1.0}), Poly({0.0, 0.0, 0.0, 1.0}), Poly({1.0})}) {
    try {
      gibbs_log_norm(W, 0.1);
      FAIL("expected NonconfiningPotential");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonconfiningPotential);
    }
  }
}

TEST_CASE("refinement budget exhaustion is reported") {
  QuadratureOptions tight;
  tight.tol = 1e-300;
  tight.max_refinements = 1;
  try {
    gibbs_log_norm(quartic_double_well(), 0.25, tight);
    FAIL("expected ToleranceNotReached");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceNotReached);
  }
}

TEST_CASE("gibbs density: normalization, cdf, variance") {
  const GibbsDensity d(quartic_double_well() + Poly({0.0, -0.2}), 0.25);
  CHECK(std::abs(d.total_mass() - 1.0) <= 1e-10);
  CHECK(d.cdf(-50.0) == 0.0);
  CHECK(d.cdf(50.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.cdf(0.0) > 0.0);
  CHECK(d.cdf(0.0) < 0.5);  // tilt pushes mass right
  const Eigen::VectorXd m = d.moments(2);
  CHECK(d.variance() == doctest::Approx(m(2) - m(1) * m(1)));
  // density integrates to 1 by a crude midpoint sum as well
  double s = 0.0;
  for (int i = 0; i < 200000; ++i) s += d(-5.0 + (i + 0.5) * 5e-5) * 5e-5;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
}
