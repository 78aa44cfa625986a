#include "mckean/general_case.hpp"

#include <algorithm>
#include <cmath>

#include "mckean/error.hpp"

namespace mckean {
namespace {

double factorial(int p) {
  double f = 1.0;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}

long double eval_extended(const Poly& p, long double x) {
  long double h = p.leading();
  for (int i = p.degree() - 1; i >= 0; --i) h = h * x + p[i];
  return h;
}

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

MomentVector dirac_point(const ModelSpec& spec) {
  MomentVector m(spec.moment_count());
  double ap = 1.0;
  for (int k = 0; k < m.size(); ++k) m(k) = ap *= spec.a();
  return m;
}

bool inside_box(const ModelSpec& spec, const MomentVector& m, double eps, double delta) {
  const double eta = std::sqrt(eps), a = spec.a();
  for (int k = 1; k <= m.size(); ++k) {
    const double half = k * std::pow(a, k - 1) * delta * eta;
    if (std::abs(m(k - 1) - std::pow(a, k)) > half) return false;
  }
  return true;
}

// Solves G(m) = 0 from m0 by damped iteration, then Newton with a forward-difference
// Jacobian. `G` returns the residual vector; `step` is the damped update direction.
template <typename Residual>
void solve_fixed_point(FixedPointReport& rep, MomentVector m, const SolverOptions& opt, Residual&& G) {
  Eigen::VectorXd r = G(m);
  double res = sup_norm(r);
  std::vector<double> history{res};
  int it = 0;
  while (res > opt.tol && it < opt.max_damped) {
    m += opt.omega * r;
    r = G(m);
    res = sup_norm(r);
    history.push_back(res);
    ++it;
    // Stalled: less than a halving over the last ten steps.
    if (it >= 10 && res > 0.5 * history[history.size() - 11]) break;
  }
  rep.iterations = it;

  int nit = 0;
  const Eigen::Index K = m.size();
  while (res > opt.tol && nit < opt.max_newton) {
    Eigen::MatrixXd J(K, K);
    for (Eigen::Index j = 0; j < K; ++j) {
      MomentVector mp = m;
      const double h = opt.fd_step * std::max(1.0, std::abs(m(j)));
      mp(j) += h;
      J.col(j) = (G(mp) - r) / h;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (lu.rank() < K) break;
    const Eigen::VectorXd dm = lu.solve(-r);
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 20; ++ls, t *= 0.5) {
      const MomentVector trial = m + t * dm;
      const Eigen::VectorXd rt = G(trial);
      const double rest = sup_norm(rt);
      if (std::isfinite(rest) && rest < res) {
        m = trial;
        r = rt;
        res = rest;
        moved = true;
        break;
      }
    }
    ++nit;
    if (!moved) break;
  }
  rep.newton_iterations = nit;
  rep.m_star = m;
  rep.residual = res;
  rep.converged = res <= opt.tol;
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::symmetric: return "symmetric";
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
  }
  return "unknown";
}

Poly effective_potential(const ModelSpec& spec, const MomentVector& m) {
  if (m.size() != spec.moment_count())
    throw Error(ErrorCode::LengthMismatch, "moment vector must have length 2n-1 = " +
                                               std::to_string(spec.moment_count()));
  const Poly& F = spec.F();
  const double a = spec.a();
  Poly Z = F.shifted(-a);
  double ap = 1.0;
  for (int p = 1; p <= spec.moment_count(); ++p) {
    ap *= a;
    const double w = (p % 2 ? -1.0 : 1.0) / factorial(p) * (m(p - 1) - ap);
    if (w != 0.0) Z += w * F.derivative(p);
  }
  return spec.V() + Z;
}

MomentVector moment_map(const ModelSpec& spec, double eps, const MomentVector& m, const QuadratureOptions& quad) {
  const int K = spec.moment_count();
  const Eigen::VectorXd mom = gibbs_moments(effective_potential(spec, m), eps, K, quad);
  return mom.tail(K);
}

MomentVector mirror(const MomentVector& m) {
  MomentVector out = m;
  for (Eigen::Index k = 0; k < out.size(); k += 2) out(k) = -out(k);  // entry k holds m_{k+1}
  return out;
}

CramerTau cramer_tau(const ModelSpec& spec) {
  const int K = spec.moment_count();
  const double a = spec.a();

  // The rank-one part grows like a^{2n} while s stays O(1), so c2^T c1 = -alpha must hold
  // to far better than double rounding. Inputs and solve both run in extended precision.
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const long double al = a, v2l = eval_extended(spec.V().derivative(2), al),
                    v3l = eval_extended(spec.V().derivative(3), al), sl = spec.alpha() + v2l;
  LVec c1(K), c2(K), rhs(K);
  CramerTau out;
  out.closed_form.resize(K);
  for (int k = 1; k <= K; ++k) {
    const long double kak = k * std::pow(al, k - 1);
    c1(k - 1) = kak;
    c2(k - 1) = (k % 2 ? -1.0L : 1.0L) / factorial(k) * eval_extended(spec.F().derivative(k + 1), al);
    rhs(k - 1) = kak * (v3l / (4.0L * sl) - (k - 1) / (4.0L * al));
    out.closed_form(k - 1) = static_cast<double>(kak * (al * v3l - (k - 1) * v2l) / (4.0L * al * v2l * sl));
    out.alpha_identity += (k % 2 ? -1.0 : 1.0) / factorial(k - 1) * spec.F().derivative(k + 1)(a) * std::pow(a, k - 1);
  }
  const LMat A = sl * LMat::Identity(K, K) + c1 * c2.transpose();
  const Eigen::FullPivLU<LMat> lu(A);
  if (lu.rank() < K) throw Error(ErrorCode::SingularSystem, "Cramer matrix is singular");
  out.tau = lu.solve(rhs).cast<double>();
  out.max_discrepancy = sup_norm(out.tau - out.closed_form);
  return out;
}

MomentVector predicted_outlying_moments(const ModelSpec& spec, double eps) {
  return dirac_point(spec) - eps * cramer_tau(spec).closed_form;
}

OutlyingPair find_outlying_moments(const ModelSpec& spec, double eps, const SolverOptions& opt) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  OutlyingPair out;
  out.condition = outlying_condition(spec);
  out.predicted = predicted_outlying_moments(spec, eps);
  out.eta = std::sqrt(eps);

  // Start from the first-order prediction unless it has left the well.
  const MomentVector dirac = dirac_point(spec);
  MomentVector m0 = out.predicted;
  for (int k = 1; k <= m0.size(); ++k)
    if (std::abs(m0(k - 1) - dirac(k - 1)) > 0.5 * k * std::pow(spec.a(), k)) m0 = dirac;

  auto G = [&](const MomentVector& m) -> Eigen::VectorXd { return moment_map(spec, eps, m, opt.quad) - m; };

  out.plus.branch = Branch::plus;
  out.plus.condition_violated = !out.condition.holds;
  solve_fixed_point(out.plus, m0, opt, G);
  out.plus.inside_box = inside_box(spec, out.plus.m_star, eps, opt.box_delta);

  out.minus.branch = Branch::minus;
  out.minus.condition_violated = out.plus.condition_violated;
  out.minus.m_star = mirror(out.plus.m_star);
  out.minus.residual = sup_norm(G(out.minus.m_star));
  out.minus.iterations = out.plus.iterations;
  out.minus.newton_iterations = out.plus.newton_iterations;
  out.minus.converged = out.minus.residual <= opt.tol;
  out.minus.inside_box = inside_box(spec, mirror(out.minus.m_star), eps, opt.box_delta);
  return out;
}

FixedPointReport symmetric_invariant(const ModelSpec& spec, double eps, const SolverOptions& opt) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  const int K = spec.moment_count();
  FixedPointReport rep;
  rep.branch = Branch::symmetric;
  rep.condition_violated = !outlying_condition(spec).holds;

  // Even entries m_2, m_4, ... sit at indices 1, 3, ...
  const int E = (K - 1) / 2;
  auto embed = [&](const Eigen::VectorXd& even) {
    MomentVector m = MomentVector::Zero(K);
    for (int i = 0; i < E; ++i) m(2 * i + 1) = even(i);
    return m;
  };
  auto G = [&](const Eigen::VectorXd& even) -> Eigen::VectorXd {
    const MomentVector phi = moment_map(spec, eps, embed(even), opt.quad);
    Eigen::VectorXd r(E);
    for (int i = 0; i < E; ++i) r(i) = phi(2 * i + 1) - even(i);
    return r;
  };

  if (E == 0) {
    rep.m_star = MomentVector::Zero(K);
    rep.residual = sup_norm(moment_map(spec, eps, rep.m_star, opt.quad) - rep.m_star);
    rep.converged = rep.residual <= opt.tol;
    return rep;
  }

  Eigen::VectorXd even(E);
  {
    const Eigen::VectorXd mom = gibbs_moments(spec.V() + spec.F(), eps, 2 * E, opt.quad);
    for (int i = 0; i < E; ++i) even(i) = mom(2 * i + 2);
  }

  if (E == 1) {
    // The scalar map m2 -> E[x^2] - m2 is decreasing; bracket [0, E_0[x^2]] holds the root.
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(1), hi = even;
    const double glo = G(lo)(0);
    if (glo <= 0.0) hi = lo;
    int it = 0;
    while (hi(0) - lo(0) > 1e-14 * std::max(1.0, hi(0)) && it < 200) {
      Eigen::VectorXd mid = 0.5 * (lo + hi);
      (G(mid)(0) > 0.0 ? lo : hi) = mid;
      ++it;
    }
    const Eigen::VectorXd root = 0.5 * (lo + hi);
    rep.iterations = it;
    rep.m_star = embed(root);
    rep.residual = sup_norm(moment_map(spec, eps, rep.m_star, opt.quad) - rep.m_star);
    rep.converged = rep.residual <= opt.tol;
    return rep;
  }

  FixedPointReport inner;
  solve_fixed_point(inner, even, opt, G);
  rep.iterations = inner.iterations;
  rep.newton_iterations = inner.newton_iterations;
  rep.m_star = embed(inner.m_star);
  rep.residual = sup_norm(moment_map(spec, eps, rep.m_star, opt.quad) - rep.m_star);
  rep.converged = rep.residual <= opt.tol;
  return rep;
}

QuarticSymmetricPoint quartic_symmetric_map(const Poly& V, double alpha, double beta, double eps, double m,
                                            const QuadratureOptions& quad) {
  const Poly W = V + Poly({0.0, 0.0, 0.5 * alpha + 1.5 * beta * m, 0.0, 0.25 * beta});
  const Eigen::VectorXd mom = gibbs_moments(W, eps, 4, quad);
  QuarticSymmetricPoint p;
  p.m = m;
  p.chi = mom(2) - m;
  p.chi_prime = -(3.0 * beta / eps) * (mom(4) - mom(2) * mom(2)) - 1.0;
  return p;
}

QuarticSymmetricSolution solve_quartic_symmetric(const Poly& V, double alpha, double beta, double eps,
                                                 int grid_points, double tol, const QuadratureOptions& quad) {
  if (!(beta >= 0.0) || !(alpha >= 0.0) || !(eps > 0.0) || grid_points < 2)
    throw Error(ErrorCode::InvalidConfig, "need alpha, beta >= 0, eps > 0 and at least two grid points");
  QuarticSymmetricSolution s;
  // chi(0) = E_0[x^2] >= 0 and chi(E_0[x^2]) <= 0, so [0, E_0[x^2]] brackets the root.
  const double upper = quartic_symmetric_map(V, alpha, beta, eps, 0.0, quad).chi;
  const double span = 2.0 * upper;
  s.strictly_decreasing = true;
  for (int i = 0; i < grid_points; ++i) {
    s.grid.push_back(quartic_symmetric_map(V, alpha, beta, eps, span * i / (grid_points - 1), quad));
    if (!(s.grid.back().chi_prime <= -1.0)) s.strictly_decreasing = false;
    if (i > 0 && (s.grid[i - 1].chi > 0.0) != (s.grid[i].chi > 0.0)) ++s.sign_changes;
  }
  double lo = 0.0, hi = upper;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (quartic_symmetric_map(V, alpha, beta, eps, mid, quad).chi > 0.0 ? lo : hi) = mid;
  }
  s.m2 = 0.5 * (lo + hi);
  s.residual = std::abs(quartic_symmetric_map(V, alpha, beta, eps, s.m2, quad).chi);
  s.moments = gibbs_moments(V + Poly({0.0, 0.0, 0.5 * alpha + 1.5 * beta * s.m2, 0.0, 0.25 * beta}), eps, 4, quad);
  return s;
}

}  // namespace mckean
