#ifndef MCKEAN_GENERAL_CASE_HPP
#define MCKEAN_GENERAL_CASE_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mckean/model.hpp"
#include "mckean/quadrature.hpp"

namespace mckean {

/// (m_1, ..., m_{2n-1}): the moments a candidate invariant law is parameterized by.
using MomentVector = Eigen::VectorXd;

/// W_m = V + Z_m with Z_m(x) = F(x - a) + sum_p ((-1)^p / p!) (m_p - a^p) F^(p)(x).
/// Equals V + F * mu up to an additive constant. Throws LengthMismatch.
Poly effective_potential(const ModelSpec& spec, const MomentVector& m);

/// Phi(m)_k = E[x^k] under exp(-2 W_m / eps), k = 1..2n-1.
MomentVector moment_map(const ModelSpec& spec, double eps, const MomentVector& m, const QuadratureOptions& quad = {});

/// m_k -> (-1)^k m_k.
MomentVector mirror(const MomentVector& m);

enum class Branch { symmetric, plus, minus };
const char* to_string(Branch b);

struct SolverOptions {
  double tol = 1e-9;  ///< sup-norm of Phi(m) - m
  double omega = 0.5;
  int max_damped = 500;
  int max_newton = 100;
  double fd_step = 1e-6;
  /// Half-width factor of the localization box around (a, a^2, ...).
  double box_delta = 0.5;
  QuadratureOptions quad{1e-12};
};

struct FixedPointReport {
  MomentVector m_star;
  double residual = 0.0;
  int iterations = 0;  ///< damped steps
  int newton_iterations = 0;
  bool converged = false;
  Branch branch = Branch::symmetric;
  /// |m_p - a^p| <= p a^{p-1} delta eta for every p, eta = sqrt(eps).
  bool inside_box = false;
  bool condition_violated = false;
};

struct CramerTau {
  Eigen::VectorXd tau;          ///< numeric solve of the linear system
  Eigen::VectorXd closed_form;  ///< k a^{k-1} (a V''' - (k-1) V'') / (4 a V'' (alpha + V''))
  double max_discrepancy = 0.0;
  /// sum_p ((-1)^p / (p-1)!) F^(p+1)(a) a^{p-1}; equals -alpha.
  double alpha_identity = 0.0;
};

/// Throws SingularSystem if the LU factorization is rank deficient.
CramerTau cramer_tau(const ModelSpec& spec);

/// a^k - tau_k eps, k = 1..2n-1.
MomentVector predicted_outlying_moments(const ModelSpec& spec, double eps);

struct OutlyingPair {
  FixedPointReport plus;
  FixedPointReport minus;
  ConditionReport condition;
  MomentVector predicted;
  double eta = 0.0;
};

/// Local search near (a, a^2, ...). Damped iteration m <- (1 - omega) m + omega Phi(m),
/// then a finite-difference Newton polish when progress stalls. The minus branch is
/// the mirror of the plus branch, re-checked against Phi. Never throws NotConverged;
/// the reports carry `converged` instead.
OutlyingPair find_outlying_moments(const ModelSpec& spec, double eps, const SolverOptions& opt = {});

/// Symmetric fixed point: odd moments pinned to 0. With n = 1 there is nothing to solve,
/// with n = 2 the single even moment is found by bisection, otherwise by damped iteration.
FixedPointReport symmetric_invariant(const ModelSpec& spec, double eps, const SolverOptions& opt = {});

/// Scalar map of the quartic example F = beta x^4/4 + alpha x^2/2 restricted to symmetric
/// laws: nu(m) ~ exp(-2 (V + F + (3 beta m / 2) x^2) / eps), chi(m) = E_nu[x^2] - m.
struct QuarticSymmetricPoint {
  double m = 0.0;
  double chi = 0.0;
  /// -(3 beta / eps) Var_nu(x^2) - 1
  double chi_prime = 0.0;
};
QuarticSymmetricPoint quartic_symmetric_map(const Poly& V, double alpha, double beta, double eps, double m,
                                            const QuadratureOptions& quad = {});

struct QuarticSymmetricSolution {
  double m2 = 0.0;
  double residual = 0.0;
  int sign_changes = 0;        ///< on the scan grid
  bool strictly_decreasing = false;  ///< chi' <= -1 at every grid point
  std::vector<QuarticSymmetricPoint> grid;
  Eigen::VectorXd moments;  ///< E[x^k], k = 0..4, of the solution
};
QuarticSymmetricSolution solve_quartic_symmetric(const Poly& V, double alpha, double beta, double eps,
                                                 int grid_points = 100, double tol = 1e-12,
                                                 const QuadratureOptions& quad = {});

}  // namespace mckean

#endif  // MCKEAN_GENERAL_CASE_HPP
