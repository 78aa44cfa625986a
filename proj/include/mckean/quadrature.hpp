#ifndef MCKEAN_QUADRATURE_HPP
#define MCKEAN_QUADRATURE_HPP

#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Dense>

#include "mckean/polynomial.hpp"

namespace mckean {

/// Gibbs integrals  I_k = int x^k exp(-2 W(x) / eps) dx  over the real line, for a
/// confining polynomial W (even degree, positive leading coefficient).
///
/// The integrand is evaluated as exp(-2 (W - min W) / eps), so it never exceeds 1;
/// the shift is carried separately and folded back in log space. The real line is
/// truncated where the integrand (times |x|^k) drops below 1e-300 of its peak, and
/// the interval is split at every critical point of W and at +-5 local widths
/// around each one. Each segment is integrated by a composite rule whose panel
/// count doubles until two successive estimates agree to `tol`.

enum class QuadratureRule { gauss_legendre, tanh_sinh };

struct QuadratureOptions {
  double tol = 1e-10;
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  /// Multiplies the distance from the outermost critical points to each truncation point.
  double radius_scale = 1.0;
  int max_refinements = 14;
};

struct GibbsIntegrals {
  double eps = 0.0;
  double shift = 0.0;  ///< min W over the real line
  double lower = 0.0;  ///< integration limits actually used
  double upper = 0.0;
  /// shifted(k) = int_{lower}^{upper} x^k exp(-2 (W - shift) / eps) dx
  Eigen::VectorXd shifted;

  double log_norm() const { return std::log(shifted(0)) - 2.0 * shift / eps; }
  /// Normalized moments E[x^k], k = 0..K.
  Eigen::VectorXd moments() const { return shifted / shifted(0); }
};

/// Raw integration pass for k = 0..kmax, optionally restricted to [lo, hi].
/// Throws Error(NonconfiningPotential) or Error(ToleranceNotReached).
GibbsIntegrals gibbs_integrals(const Poly& W, double eps, int kmax, const QuadratureOptions& opt = {},
                               double lo = -std::numeric_limits<double>::infinity(),
                               double hi = std::numeric_limits<double>::infinity());

/// log int exp(-2W/eps).
double gibbs_log_norm(const Poly& W, double eps, const QuadratureOptions& opt = {});

/// E[x^k] under the normalized density exp(-2W/eps) / lambda.
double gibbs_moment(const Poly& W, double eps, int k, const QuadratureOptions& opt = {});

/// Vector of E[x^k] for k = 0..kmax (entry 0 is 1).
Eigen::VectorXd gibbs_moments(const Poly& W, double eps, int kmax, const QuadratureOptions& opt = {});

/// E[f(X)] for a polynomial f, as the linear combination of moments.
double gibbs_expectation(const Poly& W, double eps, const Poly& f, const QuadratureOptions& opt = {});

/// Truncation interval used for moments up to order kmax.
std::pair<double, double> truncation_interval(const Poly& W, double eps, int kmax, double radius_scale = 1.0);

/// Normalized Gibbs density exp(-2W/eps - log_norm). Immutable.
class GibbsDensity {
 public:
  GibbsDensity(Poly W, double eps, const QuadratureOptions& opt = {});

  const Poly& W() const { return W_; }
  double epsilon() const { return eps_; }
  double log_norm() const { return log_norm_; }

  double log_density(double x) const { return -2.0 * W_(x) / eps_ - log_norm_; }
  double operator()(double x) const { return std::exp(log_density(x)); }

  double moment(int k) const;
  Eigen::VectorXd moments(int kmax) const;
  double variance() const;
  /// P(X <= x).
  double cdf(double x) const;
  /// Integral of the density over the real line (1 up to quadrature error).
  double total_mass() const;

 private:
  Poly W_;
  double eps_;
  QuadratureOptions opt_;
  double log_norm_;
};

}  // namespace mckean

#endif  // MCKEAN_QUADRATURE_HPP
