#ifndef MCKEAN_LINEAR_CASE_HPP
#define MCKEAN_LINEAR_CASE_HPP

#include <vector>

#include "mckean/model.hpp"
#include "mckean/quadrature.hpp"

namespace mckean {

/// Linear interaction F'(x) = alpha x. The candidate invariant law with mean m has
/// density proportional to exp(-2 W_m / eps), W_m = V + alpha x^2/2 - alpha m x.
struct LinearCaseConfig {
  Poly V;
  double alpha = 0.0;
  double epsilon = 0.0;
  double a = 0.0;  ///< positive well of V
  int m_grid = 400;
  double tol_zero = 1e-10;
  /// Positive roots are searched on [grid_min, a + 1].
  double grid_min = 1e-4;
  QuadratureOptions quad{};
};

/// From a validated spec; throws InvalidConfig unless deg F = 2.
LinearCaseConfig linear_config(const ModelSpec& spec, double eps);
/// From a bare potential and alpha >= 0 (alpha = 0 is allowed here, unlike a spec).
LinearCaseConfig linear_config(const Poly& V, double alpha, double eps);

Poly linear_potential(const LinearCaseConfig& cfg, double m);

/// Psi_eps(m): mean of the Gibbs law of W_m.
double psi(const LinearCaseConfig& cfg, double m);
/// Psi_eps(m) - m.
double chi(const LinearCaseConfig& cfg, double m);
/// x_m - m, x_m the positive minimizer of W_m; extended to m < 0 by oddness, 0 at m = 0.
double chi0(const LinearCaseConfig& cfg, double m);
/// Positive minimizer x_m of W_m (m > 0).
double positive_minimizer(const LinearCaseConfig& cfg, double m);
/// (2 alpha / eps) Var - 1, the derivative of chi from the variance identity.
double chi_prime(const LinearCaseConfig& cfg, double m);

struct InvariantMean {
  double m = 0.0;
  double chi_prime = 0.0;
  /// chi' < 0: attracting for the scalar self-consistency iteration.
  bool attracting = false;
};

struct InvariantMeanSet {
  std::vector<double> means;  ///< sorted, symmetric, contains 0
  bool symmetric_included = true;
  std::vector<InvariantMean> roots;  ///< one entry per mean, same order
  /// Grid points where |chi| < 1e-8 without a sign change (grazing contact).
  std::vector<double> near_roots;
  /// More than one positive root: the small-noise picture predicts exactly one.
  bool multiple_positive_roots = false;
};

InvariantMeanSet find_invariant_means(const LinearCaseConfig& cfg);

/// tau0 = V'''(a) / (4 V''(a) (alpha + V''(a))); the outlying mean is a - tau0 eps + o(eps).
struct FirstOrderMean {
  double a = 0.0;
  double tau0 = 0.0;
  double predict(double eps) const { return a - tau0 * eps; }
};
FirstOrderMean first_order_mean(const ModelSpec& spec);
FirstOrderMean first_order_mean(const Poly& V, double alpha);

/// Closed forms for V = x^4/4 - x^2/2. Branch 1 is the trigonometric root (three real
/// roots, |m| <= m0 with alpha < 1), branch 2 is Cardano's real root, branch 0 is m = 0.
struct ExampleClosedForms {
  double chi0_value = 0.0;
  int branch = 0;
  double delta = 0.0;  ///< alpha^2 m^2 / 4 + (alpha - 1)^3 / 27
  double m0 = 0.0;     ///< 2 (1 - alpha)^{3/2} / (3 alpha sqrt 3); 0 when alpha >= 1
  double m_c = 0.0;    ///< (3 alpha - 2) / (3 sqrt 3 alpha)
  double c = 0.0;      ///< 1 / sqrt 3, where V'' vanishes
};
ExampleClosedForms example_closed_forms(double alpha, double m);
/// Same, guarded: throws WrongPotential unless V is exactly x^4/4 - x^2/2.
ExampleClosedForms example_closed_forms(const Poly& V, double alpha, double m);

struct InvariantDensity {
  GibbsDensity density;
  double residual = 0.0;  ///< |mean of density - m|
};
InvariantDensity invariant_density(const LinearCaseConfig& cfg, double m);

}  // namespace mckean

#endif  // MCKEAN_LINEAR_CASE_HPP
