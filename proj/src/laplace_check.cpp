#include "mckean/laplace_check.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mckean/error.hpp"
#include "mckean/laplace.hpp"
#include "mckean/model.hpp"
#include "mckean/quadrature.hpp"

namespace mckean {
namespace {

// p(x - c) for p given in powers of y = x - c.
Poly centered(const Poly& p, double c) { return p.shifted(-c); }

LaplaceCase integral_case(std::string name, Poly U, Poly f) {
  return {std::move(name), "integral", std::move(U), std::move(f), 0};
}
LaplaceCase ratio_case(std::string name, Poly U, Poly f, int n) {
  return {std::move(name), "ratio", std::move(U), std::move(f), n};
}

double slope_fit(const std::vector<double>& eps, const std::vector<double>& res) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double x = std::log(eps[i]), y = std::log(res[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<double> halving_epsilons(double eps_max, double eps_min) {
  std::vector<double> out;
  for (double e = eps_max; e >= eps_min * (1.0 - 1e-12); e *= 0.5) out.push_back(e);
  return out;
}

std::vector<LaplaceCase> default_laplace_suite() {
  const Poly dw = quartic_double_well();
  const Poly skew = centered(Poly({0.0, 0.0, 0.5, 1.0 / 6.0, 1.0 / 24.0}), 1.0);
  const Poly tilted = dw + Poly({0.0, 0.5});
  const Poly outlying = dw + Poly({0.0, 0.0, 0.5, 0.0, 0.25}).shifted(-1.0);
  const Poly stiff = 10.0 * dw + Poly({0.0, 0.0, 0.5, 0.0, 0.25}).shifted(-1.0);
  const Poly well = centered(Poly({0.0, 0.0, 0.5, 0.0, 1.0}), 1.0);
  const Poly gauss = Poly({0.0, 0.0, 0.5});
  const Poly gauss1 = centered(gauss, 1.0);
  const Poly x = Poly({0.0, 1.0});

  return {
      integral_case("quartic-bowl", Poly({0.0, 0.0, 0.5, 0.0, 0.25}), Poly({1.0})),
      integral_case("quartic-bowl-x2", Poly({0.0, 0.0, 0.5, 0.0, 0.25}), Poly({1.0, 0.0, 1.0})),
      integral_case("skew-well", skew, Poly({1.0})),
      integral_case("skew-well-x", skew, x),
      integral_case("skew-well-x2", skew, Poly({1.0, 0.0, 1.0})),
      integral_case("tilted-double-well", tilted, Poly({1.0})),
      integral_case("tilted-double-well-x", tilted, x),
      integral_case("tilted-0.3-quadratic-f", dw + Poly({0.0, 0.3}), Poly({1.0, 1.0, 1.0})),
      integral_case("sextic-cubic", Poly({0.0, 0.0, 0.5, -0.2, 0.0, 0.0, 1.0 / 6.0}), Poly({1.0})),
      integral_case("cosh-taylor", Poly({0.0, 0.0, 0.5, 0.0, 1.0 / 12.0, 0.0, 1.0 / 360.0}), Poly({2.0, 0.0, 1.0})),
      integral_case("shifted-quartic", centered(Poly({0.0, 0.0, 1.0, 0.0, 1.0}), 0.5), Poly({3.0, -1.0})),
      integral_case("stiff-tilted", 10.0 * dw + x, Poly({1.0})),
      integral_case("outlying-x", outlying, x),
      integral_case("outlying-x3", outlying, Poly({0.0, 0.0, 0.0, 1.0})),
      ratio_case("linear-alpha1-m1", dw + Poly({0.0, -1.0, 0.5}), Poly(), 1),
      ratio_case("linear-alpha1-m1-n2", dw + Poly({0.0, -1.0, 0.5}), Poly(), 2),
      ratio_case("linear-alpha1-m0.9", dw + Poly({0.0, -0.9, 0.5}), Poly(), 1),
      ratio_case("stiff-outlying-n3", stiff, Poly(), 3),
      ratio_case("tilted-f-n1", well, Poly({0.0, 0.5}), 1),
      ratio_case("tilted-f-n2", well, Poly({0.0, -1.0, 0.25}), 2),
      ratio_case("left-well-n4", tilted, Poly(), 4),
      ratio_case("sextic-f-n1", Poly({0.0, 0.5, -1.0, 0.0, 0.0, 0.0, 1.0 / 6.0}), x, 1),
      integral_case("gaussian", gauss, Poly({1.0})),
      integral_case("gaussian-x2", gauss, Poly({0.0, 0.0, 1.0})),
      integral_case("gaussian-shifted-quadratic-f", gauss1, Poly({1.0, 2.0, -1.0})),
      ratio_case("gaussian-mean", gauss1, Poly(), 1),
      ratio_case("gaussian-second-moment", gauss1, Poly(), 2),
      ratio_case("gaussian-tilted-mean", gauss1, x, 1),
      integral_case("symmetric-double-well", dw, Poly({1.0})),
  };
}

std::vector<LaplaceCase> random_laplace_suite(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<LaplaceCase> out;
  for (int i = 0; i < count; ++i) {
    // y^2 (b2/2 + b3 y/6 + b4 y^2) + b6 y^6 is positive away from y = 0 when b3^2 < 72 b2 b4.
    const double b2 = 0.5 + 2.0 * u(rng);
    const double b3 = -2.0 + 4.0 * u(rng);
    const double b4 = (b3 * b3 / (72.0 * b2)) * (1.5 + u(rng)) + 0.05;
    const double b6 = u(rng) < 0.5 ? 0.0 : 0.2 * u(rng);
    const double x0 = (0.3 + 1.2 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
    const Poly U = centered(Poly({0.0, 0.0, 0.5 * b2, b3 / 6.0, b4, 0.0, b6}), x0);
    const Poly f({-1.0 + 2.0 * u(rng), -1.0 + 2.0 * u(rng), -1.0 + 2.0 * u(rng)});
    const std::string name = "random-" + std::to_string(i);
    if (i % 2 == 0)
      out.push_back(integral_case(name, U, f + Poly({2.0})));
    else
      out.push_back(ratio_case(name, U, f, 1 + (i / 2) % 3));
  }
  return out;
}

LaplaceCheckRow run_laplace_case(const LaplaceCase& c, const std::vector<double>& eps, double min_slope) {
  LaplaceCheckRow row;
  row.c = c;
  row.eps = eps;
  QuadratureOptions q;
  q.tol = 1e-13;
  try {
    const GlobalMinimum g = global_minimizer(c.U);
    if (g.degenerate) {
      row.status = "degenerate";
      row.detail = "global minimum is not unique or not quadratic; no expansion";
      row.pass = true;
      return row;
    }
    // Work with min U = 0 so the Gaussian prefactor stays representable.
    const Poly U = c.U - Poly::constant(g.value);
    for (double e : eps) {
      double quad, expansion;
      if (c.kind == "integral") {
        const ExpansionResult r = laplace_integral_o2(U, c.f, e);
        const GibbsIntegrals gi = gibbs_integrals(U, e, c.f.degree(), q);
        const double pre = std::sqrt(std::numbers::pi * e / g.W2);
        quad = c.f.coeffs().dot(gi.shifted) * std::exp(-2.0 * gi.shift / e) / pre;
        expansion = r.value(e) / pre;
      } else {
        const ExpansionResult r = laplace_moment_ratio(U, c.f, c.n, e);
        quad = gibbs_moment(U - (0.5 * e) * c.f, e, c.n, q);
        expansion = r.value(e);
      }
      row.residual.push_back(std::abs(quad - expansion));
    }
    bool exact = true;
    for (double r : row.residual) exact = exact && r <= 1e-12;
    if (exact) {
      row.status = "exact";
      row.pass = true;
      return row;
    }
    for (double& r : row.residual) r = std::max(r, 1e-300);
    row.slope = slope_fit(eps, row.residual);
    const std::size_t tail = std::min<std::size_t>(4, eps.size());
    row.tail_slope = slope_fit(std::vector<double>(eps.end() - tail, eps.end()),
                               std::vector<double>(row.residual.end() - tail, row.residual.end()));
    row.status = "slope";
    row.pass = row.slope >= min_slope;
  } catch (const Error& err) {
    row.status = err.code() == ErrorCode::DegenerateMinimum ? "degenerate" : "error";
    row.pass = err.code() == ErrorCode::DegenerateMinimum;
    row.detail = err.what();
  }
  return row;
}

}  // namespace mckean
