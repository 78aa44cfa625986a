#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mckean/error.hpp"
#include "mckean/general_case.hpp"
#include "mckean/linear_case.hpp"

using namespace mckean;

namespace {

ModelSpec stiff_spec() {
  return ModelSpec(EvenPolynomial(10.0 * quartic_double_well()), EvenPolynomial(Poly({0.0, 0.0, 0.5, 0.0, 0.25})));
}

ModelSpec double_well_quartic_spec() {
  return ModelSpec(EvenPolynomial(quartic_double_well()), EvenPolynomial(Poly({0.0, 0.0, 0.5, 0.0, 0.25})));
}

}  // namespace

TEST_CASE("effective potential is the convolution up to a constant") {
  const ModelSpec s = stiff_spec();
  const Poly F = s.F();
  // Two-atom law 0.3 delta_{-0.4} + 0.7 delta_{1.1}.
  const double w1 = 0.3, y1 = -0.4, w2 = 0.7, y2 = 1.1;
  MomentVector m(3);
  for (int k = 1; k <= 3; ++k) m(k - 1) = w1 * std::pow(y1, k) + w2 * std::pow(y2, k);
  const Poly W = effective_potential(s, m);
  auto conv = [&](double x) { return s.V()(x) + w1 * F(x - y1) + w2 * F(x - y2); };
  const double offset = W(0.0) - conv(0.0);
  for (double x : {-2.0, -0.7, 0.3, 1.0, 2.5}) CHECK(W(x) - conv(x) == doctest::Approx(offset).epsilon(1e-12));
  CHECK_THROWS_AS(effective_potential(s, MomentVector::Zero(2)), Error);
}

TEST_CASE("mirror flips odd moments") {
  MomentVector m(3);
  m << 0.9, 0.8, 0.7;
  const MomentVector r = mirror(m);
  CHECK(r(0) == -0.9);
  CHECK(r(1) == 0.8);
  CHECK(r(2) == -0.7);
  CHECK(mirror(r) == m);
}

TEST_CASE("moment map reduces to the scalar mean map for quadratic F") {
  const ModelSpec s(EvenPolynomial(quartic_double_well()), EvenPolynomial(Poly({0.0, 0.0, 0.5})));
  const LinearCaseConfig c = linear_config(s, 0.2);
  for (double m : {-0.6, 0.2, 0.9}) {
    MomentVector v(1);
    v << m;
    CHECK(moment_map(s, 0.2, v)(0) == doctest::Approx(psi(c, m)).epsilon(1e-10));
  }
}

TEST_CASE("moment map is mirror equivariant") {
  const ModelSpec s = stiff_spec();
  MomentVector m(3);
  m << 0.8, 0.7, 0.55;
  const MomentVector a = moment_map(s, 0.1, m), b = moment_map(s, 0.1, mirror(m));
  CHECK((mirror(a) - b).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("cramer system for the stiff well") {
  const CramerTau c = cramer_tau(stiff_spec());
  REQUIRE(c.tau.size() == 3);
  CHECK(c.tau(0) == doctest::Approx(1.0 / 28.0).epsilon(1e-12));
  CHECK(c.tau(1) == doctest::Approx(1.0 / 21.0).epsilon(1e-12));
  CHECK(c.tau(2) == doctest::Approx(1.0 / 28.0).epsilon(1e-12));
  CHECK(c.max_discrepancy <= 1e-12);
  CHECK(c.alpha_identity == doctest::Approx(-1.0).epsilon(1e-14));
  const MomentVector p = predicted_outlying_moments(stiff_spec(), 0.1);
  CHECK(p(0) == doctest::Approx(1.0 - 0.1 / 28.0));
}

TEST_CASE("cramer system in the linear case recovers tau0") {
  const ModelSpec s(EvenPolynomial(quartic_double_well()), EvenPolynomial(Poly({0.0, 0.0, 0.5})));
  CHECK(cramer_tau(s).tau(0) == doctest::Approx(first_order_mean(s).tau0).epsilon(1e-14));
}

TEST_CASE("outlying pair for the stiff well") {
  const double eps = 0.05;
  const OutlyingPair p = find_outlying_moments(stiff_spec(), eps);
  CHECK(p.plus.converged);
  CHECK(p.minus.converged);
  CHECK(p.plus.residual <= 1e-9);
  CHECK(p.minus.residual <= 1e-9);
  CHECK(p.plus.inside_box);
  CHECK_FALSE(p.plus.condition_violated);
  CHECK(p.condition.holds);
  CHECK(p.eta == doctest::Approx(std::sqrt(eps)));
  CHECK(p.minus.m_star == mirror(p.plus.m_star));
  CHECK(p.plus.branch == Branch::plus);
  CHECK(p.minus.branch == Branch::minus);
  // First order: the deviation from the prediction is o(eps).
  CHECK((p.plus.m_star - p.predicted).cwiseAbs().maxCoeff() <= 0.02 * eps);
}

TEST_CASE("condition violated is flagged, not thrown") {
  const ModelSpec s(EvenPolynomial(quartic_double_well()), EvenPolynomial(Poly({0.0, 0.0, 0.0, 0.0, 0.25})));
  OutlyingPair p;
  CHECK_NOTHROW(p = find_outlying_moments(s, 0.1));
  CHECK_FALSE(p.condition.holds);
  CHECK(p.plus.condition_violated);
}

TEST_CASE("symmetric invariant") {
  const ModelSpec lin(EvenPolynomial(quartic_double_well()), EvenPolynomial(Poly({0.0, 0.0, 0.5})));
  const FixedPointReport t = symmetric_invariant(lin, 0.1);
  CHECK(t.converged);
  CHECK(t.m_star(0) == 0.0);

  for (double eps : {0.1, 0.25}) {
    const FixedPointReport r = symmetric_invariant(double_well_quartic_spec(), eps);
    CHECK(r.converged);
    CHECK(r.branch == Branch::symmetric);
    CHECK(r.m_star(0) == 0.0);
    CHECK(r.m_star(2) == 0.0);
    const QuarticSymmetricSolution q = solve_quartic_symmetric(quartic_double_well(), 1.0, 1.0, eps);
    CHECK(r.m_star(1) == doctest::Approx(q.m2).epsilon(1e-9));
  }
}

TEST_CASE("quartic symmetric map: derivative formula against finite differences") {
  const Poly V = quartic_double_well();
  for (double eps : {0.1, 0.25}) {
    for (double m : {0.05, 0.2, 0.6}) {
      const double h = 1e-5;
      const double fd = (quartic_symmetric_map(V, 1.0, 1.0, eps, m + h).chi -
                         quartic_symmetric_map(V, 1.0, 1.0, eps, m - h).chi) /
                        (2.0 * h);
      const QuarticSymmetricPoint p = quartic_symmetric_map(V, 1.0, 1.0, eps, m);
      CHECK(p.chi_prime == doctest::Approx(fd).epsilon(1e-5));
      CHECK(p.chi_prime <= -1.0);
    }
  }
}

TEST_CASE("quartic symmetric scan has a unique root") {
  for (double eps : {0.1, 0.25}) {
    const QuarticSymmetricSolution q = solve_quartic_symmetric(quartic_double_well(), 1.0, 1.0, eps);
    CHECK(q.sign_changes == 1);
    CHECK(q.strictly_decreasing);
    CHECK(q.residual <= 1e-12);
    CHECK(std::abs(q.moments(1)) <= 1e-12);
    CHECK(std::abs(q.moments(3)) <= 1e-12);
    CHECK(q.moments(2) == doctest::Approx(q.m2).epsilon(1e-11));
  }
  CHECK(solve_quartic_symmetric(quartic_double_well(), 1.0, 1.0, 0.1).m2 == doctest::Approx(0.0802767761).epsilon(1e-8));
}
