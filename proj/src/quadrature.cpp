#include "mckean/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mckean/roots.hpp"

namespace mckean {
namespace {

constexpr int kGaussOrder = 16;
constexpr int kInitialPanels = 4;  // 64 nodes per segment on the first pass
constexpr double kLogDelta = 690.7755278982137;  // ln(1e300)

struct GaussRule {
  std::array<double, kGaussOrder> x{};
  std::array<double, kGaussOrder> w{};
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre recurrence.
GaussRule make_gauss_rule() {
  GaussRule r;
  const int n = kGaussOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

void check_confining(const Poly& W, double eps) {
  if (W.degree() < 2 || W.degree() % 2 != 0 || W.leading() <= 0.0)
    throw Error(ErrorCode::NonconfiningPotential,
                "W must have even degree >= 2 and positive leading coefficient: " + W.to_string());
  if (!(eps > 0.0)) throw Error(ErrorCode::DomainError, "epsilon must be positive");
}

// Accumulate sum_i w_i x_i^k exp(-2(W(x_i)-shift)/eps) into `acc` (and |x|^k into `abs_acc`).
// W - shift is evaluated as a Taylor polynomial around `center`, so the cancellation
// between large coefficients happens once, not at every node.
struct Integrand {
  Poly local;  // y -> W(center + y) - shift
  double center;
  double eps;
  int kmax;

  Integrand(const Poly& W, double eps_, double shift, int kmax_, double center_)
      : center(center_), eps(eps_), kmax(kmax_) {
    Eigen::VectorXd c = W.shifted(center).coeffs();
    c(0) = W(center) - shift;
    local = Poly(std::move(c));
  }

  void add(double x, double w, Eigen::VectorXd& acc, Eigen::VectorXd& abs_acc) const {
    const double e = std::exp(-2.0 * local(x - center) / eps);
    if (e == 0.0) return;
    double v = w * e;
    double av = std::abs(v);
    const double ax = std::abs(x);
    for (int k = 0; k <= kmax; ++k) {
      acc(k) += v;
      abs_acc(k) += av;
      v *= x;
      av *= ax;
    }
  }
};

void gauss_segment(const Integrand& f, double a, double b, int panels, Eigen::VectorXd& acc,
                   Eigen::VectorXd& abs_acc) {
  const GaussRule& g = gauss_rule();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double c = lo + 0.5 * h, r = 0.5 * h;
    for (int i = 0; i < kGaussOrder; ++i) f.add(c + r * g.x[i], r * g.w[i], acc, abs_acc);
  }
}

// Tanh-sinh on [a, b] with abscissa step 1/level_steps; t in [-tmax, tmax].
void tanh_sinh_segment(const Integrand& f, double a, double b, int level_steps, Eigen::VectorXd& acc,
                       Eigen::VectorXd& abs_acc) {
  constexpr double tmax = 3.5;
  const double h = 1.0 / level_steps;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const int n = static_cast<int>(std::ceil(tmax / h));
  const double half_pi = 0.5 * std::numbers::pi;
  for (int i = -n; i <= n; ++i) {
    const double t = i * h;
    const double u = half_pi * std::sinh(t);
    const double ch = std::cosh(u);
    const double x = std::tanh(u);
    const double w = h * half_pi * std::cosh(t) / (ch * ch);
    if (w == 0.0 || std::abs(x) >= 1.0) continue;
    f.add(c + r * x, r * w, acc, abs_acc);
  }
}

// Length scale of the Gibbs weight near a critical point c.
double local_width(const Poly& W, double eps, double c) {
  double s = std::numeric_limits<double>::infinity();
  double fact = 1.0;
  for (int k = 2; k <= W.degree(); ++k) {
    fact *= k;
    const double d = std::abs(W.derivative(k)(c));
    if (d > 0.0) s = std::min(s, std::pow(eps * fact / (2.0 * d), 1.0 / k));
  }
  return s;
}

double min_value(const Poly& W, const std::vector<double>& crit) {
  double m = std::numeric_limits<double>::infinity();
  for (double c : crit) m = std::min(m, W(c));
  return m;
}

double truncation_point(const Poly& W, double eps, double shift, int kmax, double start, double dir) {
  auto g = [&](double x) {
    return 2.0 * (W(x) - shift) / eps - 2.0 * kmax * std::log(std::max(1.0, std::abs(x)));
  };
  double step = 1.0;
  double inner = start, outer = start + dir * step;
  while (g(outer) < kLogDelta) {
    inner = outer;
    step *= 2.0;
    outer = start + dir * step;
    if (step > 1e12) throw Error(ErrorCode::NonconfiningPotential, "truncation radius diverged");
  }
  for (int i = 0; i < 200 && std::abs(outer - inner) > 1e-12 * (1.0 + std::abs(outer)); ++i) {
    const double mid = 0.5 * (inner + outer);
    (g(mid) < kLogDelta ? inner : outer) = mid;
  }
  return outer;
}

}  // namespace

std::pair<double, double> truncation_interval(const Poly& W, double eps, int kmax, double radius_scale) {
  check_confining(W, eps);
  const std::vector<double> crit = critical_points(W);
  const double shift = min_value(W, crit);
  const double cmin = *std::min_element(crit.begin(), crit.end());
  const double cmax = *std::max_element(crit.begin(), crit.end());
  const double L = truncation_point(W, eps, shift, kmax, cmin, -1.0);
  const double R = truncation_point(W, eps, shift, kmax, cmax, 1.0);
  return {cmin + radius_scale * (L - cmin), cmax + radius_scale * (R - cmax)};
}

GibbsIntegrals gibbs_integrals(const Poly& W, double eps, int kmax, const QuadratureOptions& opt, double lo,
                               double hi) {
  check_confining(W, eps);
  const std::vector<double> crit = critical_points(W);
  const double shift = min_value(W, crit);
  const auto [L0, R0] = truncation_interval(W, eps, kmax, opt.radius_scale);
  const double L = std::max(L0, lo), R = std::min(R0, hi);

  GibbsIntegrals out;
  out.eps = eps;
  out.shift = shift;
  out.lower = L;
  out.upper = R;
  out.shifted = Eigen::VectorXd::Zero(kmax + 1);
  if (!(R > L)) return out;

  std::vector<double> breaks{L, R};
  for (double c : crit) {
    const double w = 5.0 * local_width(W, eps, c);
    for (double b : {c - w, c, c + w})
      if (std::isfinite(b) && b > L && b < R) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Each segment is anchored at the critical point nearest its midpoint.
  std::vector<Integrand> local;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double mid = 0.5 * (breaks[s] + breaks[s + 1]);
    double anchor = crit.front();
    for (double c : crit)
      if (std::abs(c - mid) < std::abs(anchor - mid)) anchor = c;
    local.emplace_back(W, eps, shift, kmax, anchor);
  }
  auto run = [&](std::size_t seg, int level, Eigen::VectorXd& acc, Eigen::VectorXd& abs_acc) {
    const Integrand& f = local[seg];
    const double a = breaks[seg], b = breaks[seg + 1];
    if (opt.rule == QuadratureRule::gauss_legendre)
      gauss_segment(f, a, b, kInitialPanels << level, acc, abs_acc);
    else
      tanh_sinh_segment(f, a, b, 4 << level, acc, abs_acc);
  };

  // First pass gives the reference magnitudes for the per-segment stopping rule.
  const std::size_t nseg = breaks.size() - 1;
  std::vector<Eigen::VectorXd> coarse(nseg, Eigen::VectorXd::Zero(kmax + 1));
  Eigen::VectorXd ref = Eigen::VectorXd::Zero(kmax + 1);
  for (std::size_t s = 0; s < nseg; ++s) {
    Eigen::VectorXd abs_acc = Eigen::VectorXd::Zero(kmax + 1);
    run(s, 0, coarse[s], abs_acc);
    ref += abs_acc;
  }
  const Eigen::VectorXd atol = (opt.tol / static_cast<double>(nseg)) * ref.cwiseMax(1e-300);

  for (std::size_t s = 0; s < nseg; ++s) {
    Eigen::VectorXd prev = coarse[s];
    bool done = false;
    for (int level = 1; level <= opt.max_refinements; ++level) {
      Eigen::VectorXd cur = Eigen::VectorXd::Zero(kmax + 1), abs_acc = Eigen::VectorXd::Zero(kmax + 1);
      run(s, level, cur, abs_acc);
      const bool agree = ((cur - prev).cwiseAbs().array() <= atol.array()).all();
      prev = std::move(cur);
      if (agree) {
        done = true;
        break;
      }
    }
    if (!done)
      throw Error(ErrorCode::ToleranceNotReached, "segment [" + std::to_string(breaks[s]) + ", " +
                                                      std::to_string(breaks[s + 1]) + "] did not converge");
    out.shifted += prev;
  }
  return out;
}

double gibbs_log_norm(const Poly& W, double eps, const QuadratureOptions& opt) {
  return gibbs_integrals(W, eps, 0, opt).log_norm();
}

double gibbs_moment(const Poly& W, double eps, int k, const QuadratureOptions& opt) {
  const GibbsIntegrals g = gibbs_integrals(W, eps, k, opt);
  return g.shifted(k) / g.shifted(0);
}

Eigen::VectorXd gibbs_moments(const Poly& W, double eps, int kmax, const QuadratureOptions& opt) {
  return gibbs_integrals(W, eps, kmax, opt).moments();
}

double gibbs_expectation(const Poly& W, double eps, const Poly& f, const QuadratureOptions& opt) {
  const Eigen::VectorXd m = gibbs_moments(W, eps, f.degree(), opt);
  return f.coeffs().dot(m);
}

GibbsDensity::GibbsDensity(Poly W, double eps, const QuadratureOptions& opt)
    : W_(std::move(W)), eps_(eps), opt_(opt), log_norm_(gibbs_log_norm(W_, eps_, opt_)) {}

double GibbsDensity::moment(int k) const { return gibbs_moment(W_, eps_, k, opt_); }

Eigen::VectorXd GibbsDensity::moments(int kmax) const { return gibbs_moments(W_, eps_, kmax, opt_); }

double GibbsDensity::variance() const {
  const Eigen::VectorXd m = moments(2);
  return m(2) - m(1) * m(1);
}

double GibbsDensity::cdf(double x) const {
  const GibbsIntegrals part = gibbs_integrals(W_, eps_, 0, opt_, -std::numeric_limits<double>::infinity(), x);
  const GibbsIntegrals all = gibbs_integrals(W_, eps_, 0, opt_);
  return part.shifted(0) / all.shifted(0);
}

double GibbsDensity::total_mass() const {
  QuadratureOptions other = opt_;
  other.rule = opt_.rule == QuadratureRule::gauss_legendre ? QuadratureRule::tanh_sinh
                                                           : QuadratureRule::gauss_legendre;
  const GibbsIntegrals g = gibbs_integrals(W_, eps_, 0, other);
  return std::exp(std::log(g.shifted(0)) - 2.0 * g.shift / eps_ - log_norm_);
}

}  // namespace mckean
