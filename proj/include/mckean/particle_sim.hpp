#ifndef MCKEAN_PARTICLE_SIM_HPP
#define MCKEAN_PARTICLE_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "mckean/model.hpp"
#include "mckean/quadrature.hpp"

namespace mckean {

/// N-particle Euler-Maruyama scheme
///   X^i <- X^i - [V'(X^i) + (1/N) sum_j F'(X^i - X^j)] dt + noise_sign sqrt(eps dt) xi^i.
/// The interaction is evaluated through the empirical moments, O(N deg F) per step.
///
/// Normals come from a counter-based stream: xi for particle i at step s is a pure
/// function of (seed, i, s), so the output never depends on evaluation order.
struct SimConfig {
  Poly V;
  Poly F;
  int N = 1000;
  double epsilon = 0.0;
  double dt = 0.0;        ///< 0 selects min(0.01, 0.1 eps)
  double T = 0.0;
  double burn_in = -1.0;  ///< negative selects T / 5
  /// One value for every particle, or one per particle.
  std::vector<double> x0{0.0};
  std::uint64_t seed = 1;
  /// -1 flips every increment; with x0 negated this mirrors the run exactly.
  double noise_sign = 1.0;
  int record_every = 1;  ///< steps between recorded frames
  double hist_lo = -3.0;
  double hist_hi = 3.0;
  int hist_bins = 60;
  int batches = 30;
};

/// Config for a validated model.
SimConfig sim_config(const ModelSpec& spec, double eps, double T);
/// Test mode: V and F are only required to be polynomials (e.g. V = x^2/2, F = 0).
SimConfig unchecked_sim_config(const Poly& V, const Poly& F, double eps, double T);

struct SimOutput {
  int moment_count = 0;  ///< K = max(2n - 1, 2)
  std::vector<double> t;
  Eigen::MatrixXd moment_series;  ///< frames x K, empirical E[x^k]
  Eigen::VectorXd stationary_moments;
  Eigen::VectorXd stderr_moments;  ///< batch means
  std::vector<double> edges;       ///< hist_bins + 1 edges; outliers land in the end bins
  std::vector<std::uint64_t> counts;
  std::uint64_t stationary_frames = 0;
  std::vector<double> final_positions;
  double dt = 0.0;
  double burn_in = 0.0;
};

/// Throws InvalidConfig, or Blowup when a particle leaves [-1e6, 1e6].
SimOutput simulate(const SimConfig& cfg);

/// (1/N) sum_j F'(x - x_j) for every particle, via empirical moments.
std::vector<double> interaction_drift(const Poly& F, const std::vector<double>& x);
/// Same, by the O(N^2) pairwise sum. Reference for tests.
std::vector<double> interaction_drift_naive(const Poly& F, const std::vector<double>& x);

/// Standard normal for (seed, particle, step).
double normal_variate(std::uint64_t seed, std::uint64_t particle, std::uint64_t step);

struct EmpiricalComparison {
  Eigen::VectorXd moment_distances;  ///< |empirical - density| for k = 1..K
  double sup_cdf_distance = 0.0;     ///< over interior histogram edges
};
EmpiricalComparison empirical_vs_density(const SimOutput& out, const GibbsDensity& d);

void write_moment_csv(const SimOutput& out, std::ostream& os);
void write_histogram_csv(const SimOutput& out, std::ostream& os);

}  // namespace mckean

#endif  // MCKEAN_PARTICLE_SIM_HPP
