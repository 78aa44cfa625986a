#include "mckean/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace mckean {
namespace {

// Magnitude of the terms of p at x; |p(x)| below a small multiple of this is "zero".
double term_scale(const Poly& p, double x) {
  double s = 0.0, xp = 1.0;
  const double ax = std::abs(x);
  for (int i = 0; i <= p.degree(); ++i) {
    s += std::abs(p[i]) * xp;
    xp *= ax;
  }
  return s;
}

double polish(const Poly& p, const Poly& dp, double x) {
  double best = x, best_val = std::abs(p(x));
  for (int it = 0; it < 60 && best_val > 0.0; ++it) {
    const double d = dp(x);
    if (d == 0.0) break;
    const double next = x - p(x) / d;
    if (!std::isfinite(next)) break;
    const double v = std::abs(p(next));
    if (v < best_val) {
      best = next;
      best_val = v;
    } else if (it > 5) {
      break;
    }
    if (next == x) break;
    x = next;
  }
  return best;
}

}  // namespace

double root_bound(const Poly& p) {
  const int d = p.degree();
  if (d < 1) return 0.0;
  double m = 0.0;
  for (int i = 0; i < d; ++i) m = std::max(m, std::abs(p[i] / p.leading()));
  return 1.0 + m;
}

std::vector<RealRoot> real_roots(const Poly& p, double cluster_tol) {
  if (p.is_zero()) throw Error(ErrorCode::DomainError, "real_roots of the zero polynomial");
  std::vector<RealRoot> out;

  // Exact roots at zero.
  int zero_mult = 0;
  while (zero_mult < p.degree() && p[zero_mult] == 0.0) ++zero_mult;
  Poly q(Poly::Coeffs(p.coeffs().tail(p.degree() + 1 - zero_mult)));

  std::vector<double> cand;
  const int d = q.degree();
  if (d == 1) {
    cand.push_back(-q[0] / q[1]);
  } else if (d >= 2) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    comp.diagonal(-1).setOnes();
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -q[i] / q.leading();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    const auto& ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const double re = ev(i).real(), im = ev(i).imag();
      if (std::abs(im) <= 1e-5 * (1.0 + std::abs(re))) cand.push_back(re);
    }
  }

  const Poly dq = q.derivative();
  std::vector<double> polished;
  for (double c : cand) {
    const double x = polish(q, dq, c);
    if (std::abs(q(x)) <= 1e-9 * term_scale(q, x)) polished.push_back(x);
  }
  std::sort(polished.begin(), polished.end());

  // Merge clusters: near-identical candidates, or close candidates straddling a
  // multiple root (q' also vanishes between them).
  for (std::size_t i = 0; i < polished.size();) {
    std::size_t j = i + 1;
    double sum = polished[i];
    while (j < polished.size()) {
      const double gap = polished[j] - polished[j - 1];
      const double ref = 1.0 + std::abs(polished[j]);
      const double mid = 0.5 * (polished[j] + polished[j - 1]);
      const bool same = gap <= cluster_tol * ref ||
                        (gap <= 1e-5 * ref && std::abs(dq(mid)) <= 1e-5 * term_scale(dq, mid));
      if (!same) break;
      sum += polished[j];
      ++j;
    }
    out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }

  if (zero_mult > 0) {
    // A polished root numerically at zero merges with the exact zero factor.
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const RealRoot& r) { return std::abs(r.x) <= cluster_tol; });
    if (it != out.end()) {
      it->x = 0.0;
      it->multiplicity += zero_mult;
    } else {
      out.push_back({0.0, zero_mult});
    }
    std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.x < b.x; });
  }
  return out;
}

std::vector<double> real_root_values(const Poly& p, double cluster_tol) {
  std::vector<double> v;
  for (const auto& r : real_roots(p, cluster_tol)) v.push_back(r.x);
  return v;
}

std::vector<double> critical_points(const Poly& p) {
  const Poly dp = p.derivative();
  if (dp.is_zero()) return {};
  if (dp.degree() == 0) return {};
  return real_root_values(dp);
}

PolyMinimum minimize_on(const Poly& p, double lo, double hi) {
  const double inf = std::numeric_limits<double>::infinity();
  const int d = p.degree();
  if (d >= 1) {
    const bool right_down = std::isinf(hi) && p.leading() < 0.0;
    const bool left_down = std::isinf(lo) && ((d % 2 == 0) ? p.leading() < 0.0 : p.leading() > 0.0);
    if (right_down) return {hi, -inf, false};
    if (left_down) return {lo, -inf, false};
  }
  PolyMinimum best{0.0, inf, true};
  auto consider = [&](double x) {
    const double v = p(x);
    if (v < best.value) best = {x, v, true};
  };
  if (std::isfinite(lo)) consider(lo);
  if (std::isfinite(hi)) consider(hi);
  for (double c : critical_points(p))
    if (c >= lo && c <= hi) consider(c);
  if (!std::isfinite(best.value)) consider(std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0));
  return best;
}

bool nonnegative_on(const Poly& p, double lo, double hi, double tol) {
  const PolyMinimum m = minimize_on(p, lo, hi);
  return m.bounded && m.value >= -tol * std::max(1.0, p.scale());
}

}  // namespace mckean
