#ifndef MCKEAN_LAPLACE_CHECK_HPP
#define MCKEAN_LAPLACE_CHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mckean/polynomial.hpp"

namespace mckean {

/// One row of the expansion-versus-quadrature table.
///   integral: int f e^{-2U/eps} against laplace_integral_o2, both divided by the
///             Gaussian prefactor so the residual is O(eps^2) on an O(1) scale;
///   ratio:    Gibbs mean of x^n under e^f e^{-2U/eps} against laplace_moment_ratio.
struct LaplaceCase {
  std::string name;
  std::string kind;  ///< "integral" or "ratio"
  Poly U;
  Poly f;
  int n = 1;
};

struct LaplaceCheckRow {
  LaplaceCase c;
  std::vector<double> eps;
  std::vector<double> residual;
  double slope = 0.0;  ///< least-squares slope of log residual against log eps
  /// Same fit over the four smallest eps; separates pre-asymptotic rows from wrong ones.
  double tail_slope = 0.0;
  /// "slope", "exact" (residual <= 1e-12 throughout), "degenerate", or "error".
  std::string status;
  std::string detail;
  bool pass = false;  ///< slope >= min_slope, or exact
};

std::vector<LaplaceCase> default_laplace_suite();
std::vector<LaplaceCase> random_laplace_suite(int count, std::uint64_t seed);

/// eps_max, eps_max/2, ... down to eps_min.
std::vector<double> halving_epsilons(double eps_max = 0.1, double eps_min = 1e-3);

LaplaceCheckRow run_laplace_case(const LaplaceCase& c, const std::vector<double>& eps, double min_slope = 1.8);

}  // namespace mckean

#endif  // MCKEAN_LAPLACE_CHECK_HPP
