#ifndef MCKEAN_LAPLACE_HPP
#define MCKEAN_LAPLACE_HPP

#include <string>
#include <vector>

#include "mckean/polynomial.hpp"

namespace mckean {

/// Order-one asymptotic expansion: value(t) = leading + first_order_coeff * t, where t is
/// epsilon or eta depending on the evaluator.
struct ExpansionResult {
  double leading = 0.0;
  double first_order_coeff = 0.0;
  double minimizer = 0.0;
  bool valid = true;
  std::string reason;
  /// log of the Gaussian prefactor sqrt(pi eps / U'') exp(-2 U(x0) / eps), when one applies.
  double log_prefactor = 0.0;

  double value(double t) const { return leading + first_order_coeff * t; }
};

struct GlobalMinimum {
  double x_star = 0.0;
  double W2 = 0.0;     ///< W''(x_star)
  double value = 0.0;  ///< W(x_star)
  bool degenerate = false;
};

/// Argmin of a confining polynomial over its real critical points. `degenerate` is set
/// when another critical point ties the minimum (within 1e-10 (1 + |W|)) or W'' <= 1e-12.
GlobalMinimum global_minimizer(const Poly& W);

/// exp(-U(x)) / U'(x), the leading behaviour of int_x^inf exp(-U). Throws DomainError
/// when U'(x) <= 0.
double tail_equivalent(const Poly& U, double x);

/// Small-eps limit of int_a^b exp(-U / eps) around a flat interior minimum of even
/// contact order 2 k0:  (1/k0) (eps (2k0)! / U^(2k0))^(1/(2k0)) Gamma(1/(2k0)) e^{-U(xmin)/eps}.
double flat_minimum_integral(const Poly& U, double eps, double a, double b);

/// int f exp(-2U/eps) over R to first order in eps. `leading` and `first_order_coeff`
/// both carry the prefactor, so value(eps) approximates the integral itself.
ExpansionResult laplace_integral_o2(const Poly& U, const Poly& f, double eps);

/// int t^n e^f e^{-2U/eps} / int e^f e^{-2U/eps} to first order in eps.
/// Throws ZeroMinimizer for n >= 2 at a minimizer within 1e-12 of 0.
ExpansionResult laplace_moment_ratio(const Poly& U, const Poly& f, int n, double eps);

struct PerturbedMinimizer {
  double exact = 0.0;
  double predicted = 0.0;
};

/// Argmin of U + eta mu G, exactly (root isolation) and to first order in eta.
PerturbedMinimizer perturbed_minimizer(const Poly& U, const Poly& G, double mu, double eta);

/// First-order prediction of the Gibbs average of f under U + eta sum_i mu_i G_i.
ExpansionResult perturbed_ratio(const Poly& U, const std::vector<Poly>& G, const std::vector<double>& mu,
                                const Poly& f, double eta);

}  // namespace mckean

#endif  // MCKEAN_LAPLACE_HPP
