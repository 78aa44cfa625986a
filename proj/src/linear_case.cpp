#include "mckean/linear_case.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "mckean/error.hpp"
#include "mckean/roots.hpp"

namespace mckean {
namespace {

void check_config(double alpha, double eps) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha must be nonnegative");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
}

// Worker count for grid scans, from MCKEAN_THREADS (default 1, the reference path).
int worker_count() {
  const char* s = std::getenv("MCKEAN_THREADS");
  if (!s) return 1;
  const int n = std::atoi(s);
  return std::clamp(n, 1, 64);
}

std::vector<double> chi_on_grid(const LinearCaseConfig& cfg, const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  const int workers = std::min<int>(worker_count(), static_cast<int>(grid.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = chi(cfg, grid[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < grid.size(); i += workers) out[i] = chi(cfg, grid[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double bisect(const LinearCaseConfig& cfg, double lo, double hi, double flo) {
  while (hi - lo > cfg.tol_zero) {
    const double mid = 0.5 * (lo + hi);
    const double fm = chi(cfg, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

LinearCaseConfig linear_config(const ModelSpec& spec, double eps) {
  if (spec.n() != 1) throw Error(ErrorCode::InvalidConfig, "linear case needs a quadratic interaction");
  LinearCaseConfig cfg;
  cfg.V = spec.V();
  cfg.alpha = spec.alpha();
  cfg.epsilon = eps;
  cfg.a = spec.a();
  check_config(cfg.alpha, eps);
  return cfg;
}

LinearCaseConfig linear_config(const Poly& V, double alpha, double eps) {
  const PotentialReport r = validate_potential(V);
  if (!r.ok) {
    std::string msg;
    for (const auto& v : r.violations) msg += v + "; ";
    throw Error(ErrorCode::InvalidModel, msg);
  }
  check_config(alpha, eps);
  LinearCaseConfig cfg;
  cfg.V = V;
  cfg.alpha = alpha;
  cfg.epsilon = eps;
  cfg.a = r.a;
  return cfg;
}

Poly linear_potential(const LinearCaseConfig& cfg, double m) {
  return cfg.V + Poly({0.0, -cfg.alpha * m, 0.5 * cfg.alpha});
}

double psi(const LinearCaseConfig& cfg, double m) {
  return gibbs_moment(linear_potential(cfg, m), cfg.epsilon, 1, cfg.quad);
}

double chi(const LinearCaseConfig& cfg, double m) { return psi(cfg, m) - m; }

double positive_minimizer(const LinearCaseConfig& cfg, double m) {
  const Poly W = linear_potential(cfg, m);
  double best = 0.0, best_val = std::numeric_limits<double>::infinity();
  for (double c : critical_points(W)) {
    if (c <= 0.0) continue;
    const double v = W(c);
    if (v < best_val) {
      best_val = v;
      best = c;
    }
  }
  if (!(best > 0.0)) throw Error(ErrorCode::DegenerateMinimum, "W_m has no positive minimizer");
  return best;
}

double chi0(const LinearCaseConfig& cfg, double m) {
  if (m == 0.0) return 0.0;
  if (m < 0.0) return -chi0(cfg, -m);
  return positive_minimizer(cfg, m) - m;
}

double chi_prime(const LinearCaseConfig& cfg, double m) {
  const Eigen::VectorXd mom = gibbs_moments(linear_potential(cfg, m), cfg.epsilon, 2, cfg.quad);
  const double var = mom(2) - mom(1) * mom(1);
  return 2.0 * cfg.alpha / cfg.epsilon * var - 1.0;
}

InvariantMeanSet find_invariant_means(const LinearCaseConfig& cfg) {
  if (cfg.m_grid < 2) throw Error(ErrorCode::InvalidConfig, "m_grid must be at least 2");
  const double hi = cfg.a + 1.0;
  std::vector<double> grid(cfg.m_grid);
  for (int i = 0; i < cfg.m_grid; ++i) grid[i] = cfg.grid_min + (hi - cfg.grid_min) * i / (cfg.m_grid - 1);
  const std::vector<double> val = chi_on_grid(cfg, grid);

  InvariantMeanSet out;
  std::vector<double> positive;
  for (int i = 0; i < cfg.m_grid; ++i) {
    if (val[i] == 0.0) {
      positive.push_back(grid[i]);
      continue;
    }
    if (i + 1 < cfg.m_grid && val[i + 1] != 0.0 && (val[i] > 0.0) != (val[i + 1] > 0.0)) {
      positive.push_back(bisect(cfg, grid[i], grid[i + 1], val[i]));
    } else if (std::abs(val[i]) < 1e-8) {
      out.near_roots.push_back(grid[i]);
    }
  }
  out.multiple_positive_roots = positive.size() > 1;

  for (double m : positive) out.means.push_back(-m);
  out.means.push_back(0.0);
  for (double m : positive) out.means.push_back(m);
  std::sort(out.means.begin(), out.means.end());

  // chi' is even in m, so the negative roots reuse the positive evaluations.
  for (double m : out.means) {
    InvariantMean r;
    r.m = m;
    r.chi_prime = chi_prime(cfg, std::abs(m));
    r.attracting = r.chi_prime < 0.0;
    out.roots.push_back(r);
  }
  return out;
}

FirstOrderMean first_order_mean(const Poly& V, double alpha) {
  const PotentialReport r = validate_potential(V);
  if (!r.ok) throw Error(ErrorCode::InvalidModel, "potential fails the double-well checks");
  const double v2 = V.derivative(2)(r.a), v3 = V.derivative(3)(r.a);
  return {r.a, v3 / (4.0 * v2 * (alpha + v2))};
}

FirstOrderMean first_order_mean(const ModelSpec& spec) {
  if (spec.n() != 1) throw Error(ErrorCode::InvalidConfig, "linear case needs a quadratic interaction");
  return first_order_mean(spec.V(), spec.alpha());
}

ExampleClosedForms example_closed_forms(double alpha, double m) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::DomainError, "alpha must be positive");
  const double s3 = std::sqrt(3.0);
  ExampleClosedForms r;
  r.c = 1.0 / s3;
  r.m_c = (3.0 * alpha - 2.0) / (3.0 * s3 * alpha);
  r.m0 = alpha < 1.0 ? 2.0 * std::pow(1.0 - alpha, 1.5) / (3.0 * alpha * s3) : 0.0;
  r.delta = alpha * alpha * m * m / 4.0 + std::pow(alpha - 1.0, 3) / 27.0;
  if (m == 0.0) return r;

  const double am = alpha * std::abs(m);
  double x;
  if (alpha < 1.0 && std::abs(m) <= r.m0) {
    r.branch = 1;
    const double arg = std::clamp(0.5 * am * std::sqrt(27.0 / std::pow(1.0 - alpha, 3)), -1.0, 1.0);
    x = 2.0 * std::sqrt((1.0 - alpha) / 3.0) * std::cos(std::acos(arg) / 3.0);
  } else {
    r.branch = 2;
    const double sd = std::sqrt(std::max(r.delta, 0.0));
    x = std::cbrt(0.5 * am + sd) + std::cbrt(0.5 * am - sd);
  }
  r.chi0_value = (m > 0.0 ? 1.0 : -1.0) * (x - std::abs(m));
  return r;
}

ExampleClosedForms example_closed_forms(const Poly& V, double alpha, double m) {
  if (!(V == quartic_double_well()))
    throw Error(ErrorCode::WrongPotential, "closed forms hold only for x^4/4 - x^2/2");
  return example_closed_forms(alpha, m);
}

InvariantDensity invariant_density(const LinearCaseConfig& cfg, double m) {
  GibbsDensity d(linear_potential(cfg, m), cfg.epsilon, cfg.quad);
  const double residual = std::abs(d.moment(1) - m);
  return {std::move(d), residual};
}

}  // namespace mckean
