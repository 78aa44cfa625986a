#include "mckean/particle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "mckean/error.hpp"

namespace mckean {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in (0, 1) with 53 random bits.
double open_uniform(std::uint64_t bits) { return ((bits >> 11) + 0.5) * 0x1.0p-53; }

// Drift polynomial D(x) = V'(x) + sum_q c_q sum_r C(q, r) (-1)^r M_r x^{q-r}, where
// F'(y) = sum_q c_q y^q and M_r is the r-th empirical moment.
Eigen::VectorXd drift_coeffs(const Eigen::VectorXd& dV, const Eigen::VectorXd& dF, const std::vector<double>& M) {
  const Eigen::Index deg = std::max(dV.size(), dF.size());
  Eigen::VectorXd d = Eigen::VectorXd::Zero(deg);
  d.head(dV.size()) = dV;
  for (Eigen::Index q = 0; q < dF.size(); ++q) {
    if (dF(q) == 0.0) continue;
    double binom = 1.0;  // C(q, r)
    for (Eigen::Index r = 0; r <= q; ++r) {
      d(q - r) += dF(q) * binom * (r % 2 ? -M[r] : M[r]);
      binom = binom * static_cast<double>(q - r) / static_cast<double>(r + 1);
    }
  }
  return d;
}

double horner(const Eigen::VectorXd& c, double x) {
  double h = c(c.size() - 1);
  for (Eigen::Index i = c.size() - 2; i >= 0; --i) h = h * x + c(i);
  return h;
}

void empirical_moments(const std::vector<double>& x, int rmax, std::vector<double>& M) {
  M.assign(rmax + 1, 0.0);
  for (double xi : x) {
    double p = 1.0;
    for (int r = 0; r <= rmax; ++r) {
      M[r] += p;
      p *= xi;
    }
  }
  const double inv = 1.0 / static_cast<double>(x.size());
  for (double& m : M) m *= inv;
}

SimConfig base_config(const Poly& V, const Poly& F, double eps, double T) {
  SimConfig c;
  c.V = V;
  c.F = F;
  c.epsilon = eps;
  c.T = T;
  return c;
}

}  // namespace

double normal_variate(std::uint64_t seed, std::uint64_t particle, std::uint64_t step) {
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ particle) ^ (step * 0xd1b54a32d192ed03ULL);
  const std::uint64_t b1 = splitmix64(key), b2 = splitmix64(key ^ 0xa0761d6478bd642fULL);
  const double u1 = open_uniform(b1), u2 = open_uniform(b2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SimConfig sim_config(const ModelSpec& spec, double eps, double T) { return base_config(spec.V(), spec.F(), eps, T); }

SimConfig unchecked_sim_config(const Poly& V, const Poly& F, double eps, double T) {
  return base_config(V, F, eps, T);
}

std::vector<double> interaction_drift(const Poly& F, const std::vector<double>& x) {
  const Poly dF = F.derivative();
  std::vector<double> M;
  empirical_moments(x, std::max(dF.degree(), 0), M);
  const Eigen::VectorXd c = drift_coeffs(Eigen::VectorXd::Zero(1), dF.coeffs(), M);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = horner(c, x[i]);
  return out;
}

std::vector<double> interaction_drift_naive(const Poly& F, const std::vector<double>& x) {
  const Poly dF = F.derivative();
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (double xj : x) out[i] += dF(x[i] - xj);
    out[i] /= static_cast<double>(x.size());
  }
  return out;
}

SimOutput simulate(const SimConfig& cfg) {
  const double dt = cfg.dt > 0.0 ? cfg.dt : std::min(0.01, 0.1 * cfg.epsilon);
  const double burn = cfg.burn_in >= 0.0 ? cfg.burn_in : cfg.T / 5.0;
  if (cfg.dt < 0.0 || !std::isfinite(cfg.dt))
    throw Error(ErrorCode::InvalidConfig, "dt must be positive, or 0 for the default");
  if (cfg.N < 1) throw Error(ErrorCode::InvalidConfig, "N must be at least 1");
  if (!(cfg.epsilon > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  if (!(cfg.T > burn) || !(dt > 0.0)) throw Error(ErrorCode::InvalidConfig, "need dt > 0 and T > burn_in >= 0");
  if (cfg.x0.size() != 1 && cfg.x0.size() != static_cast<std::size_t>(cfg.N))
    throw Error(ErrorCode::InvalidConfig, "x0 must hold one value or N values");
  if (cfg.record_every < 1 || cfg.hist_bins < 1 || !(cfg.hist_hi > cfg.hist_lo) || cfg.batches < 2)
    throw Error(ErrorCode::InvalidConfig, "bad recording or histogram parameters");

  const int K = std::max(cfg.F.degree() - 1, 2);
  const Poly dF = cfg.F.derivative();
  const Eigen::VectorXd dV = cfg.V.derivative().coeffs();
  const long long steps = std::llround(cfg.T / dt);
  const double noise = cfg.noise_sign * std::sqrt(cfg.epsilon * dt);

  std::vector<double> x(cfg.N);
  for (int i = 0; i < cfg.N; ++i) x[i] = cfg.x0.size() == 1 ? cfg.x0[0] : cfg.x0[i];

  SimOutput out;
  out.moment_count = K;
  out.dt = dt;
  out.burn_in = burn;
  out.edges.resize(cfg.hist_bins + 1);
  for (int b = 0; b <= cfg.hist_bins; ++b)
    out.edges[b] = cfg.hist_lo + (cfg.hist_hi - cfg.hist_lo) * b / cfg.hist_bins;
  out.counts.assign(cfg.hist_bins, 0);

  std::vector<std::vector<double>> series;
  std::vector<double> M;
  const double bin_scale = cfg.hist_bins / (cfg.hist_hi - cfg.hist_lo);

  auto record = [&](long long s) {
    empirical_moments(x, K, M);
    const double t = s * dt;
    out.t.push_back(t);
    series.emplace_back(M.begin() + 1, M.end());
    if (t >= burn) {
      ++out.stationary_frames;
      for (double xi : x) {
        const auto b = static_cast<long long>(std::floor((xi - cfg.hist_lo) * bin_scale));
        ++out.counts[std::clamp<long long>(b, 0, cfg.hist_bins - 1)];
      }
    }
  };

  record(0);
  const int rmax = std::max(dF.degree(), 0);
  for (long long s = 1; s <= steps; ++s) {
    empirical_moments(x, rmax, M);
    const Eigen::VectorXd d = drift_coeffs(dV, dF.coeffs(), M);
    for (int i = 0; i < cfg.N; ++i) {
      x[i] += -horner(d, x[i]) * dt + noise * normal_variate(cfg.seed, i, s);
      if (!(std::abs(x[i]) <= 1e6))
        throw Error(ErrorCode::Blowup, "particle " + std::to_string(i) + " left [-1e6, 1e6] at step " +
                                           std::to_string(s) + "; reduce dt");
    }
    if (s % cfg.record_every == 0) record(s);
  }

  const Eigen::Index frames = static_cast<Eigen::Index>(series.size());
  out.moment_series.resize(frames, K);
  for (Eigen::Index f = 0; f < frames; ++f)
    for (int k = 0; k < K; ++k) out.moment_series(f, k) = series[f][k];

  // Time averages and batch-means standard errors over the stationary frames.
  const Eigen::Index first = frames - static_cast<Eigen::Index>(out.stationary_frames);
  const Eigen::MatrixXd stat = out.moment_series.bottomRows(frames - first);
  out.stationary_moments = stat.colwise().mean().transpose();
  const Eigen::Index B = std::min<Eigen::Index>(cfg.batches, stat.rows());
  out.stderr_moments = Eigen::VectorXd::Constant(K, std::numeric_limits<double>::quiet_NaN());
  if (B >= 2) {
    const Eigen::Index len = stat.rows() / B;
    Eigen::MatrixXd means(B, K);
    for (Eigen::Index b = 0; b < B; ++b) means.row(b) = stat.middleRows(b * len, len).colwise().mean();
    const Eigen::RowVectorXd mu = means.colwise().mean();
    const Eigen::RowVectorXd var = (means.rowwise() - mu).array().square().colwise().sum() / (B - 1.0);
    out.stderr_moments = (var.array() / static_cast<double>(B)).sqrt().transpose();
  }
  out.final_positions = std::move(x);
  return out;
}

EmpiricalComparison empirical_vs_density(const SimOutput& out, const GibbsDensity& d) {
  EmpiricalComparison c;
  const int K = static_cast<int>(out.stationary_moments.size());
  const Eigen::VectorXd exact = d.moments(K);
  c.moment_distances = (out.stationary_moments - exact.tail(K)).cwiseAbs();
  std::uint64_t total = 0;
  for (auto n : out.counts) total += n;
  if (total == 0) return c;
  std::uint64_t below = 0;
  for (std::size_t b = 1; b + 1 < out.edges.size(); ++b) {
    below += out.counts[b - 1];
    const double emp = static_cast<double>(below) / static_cast<double>(total);
    c.sup_cdf_distance = std::max(c.sup_cdf_distance, std::abs(emp - d.cdf(out.edges[b])));
  }
  return c;
}

void write_moment_csv(const SimOutput& out, std::ostream& os) {
  os << "t";
  for (int k = 1; k <= out.moment_count; ++k) os << ",m" << k;
  os << "\n";
  char buf[64];
  for (std::size_t f = 0; f < out.t.size(); ++f) {
    std::snprintf(buf, sizeof buf, "%.17g", out.t[f]);
    os << buf;
    for (int k = 0; k < out.moment_count; ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", out.moment_series(static_cast<Eigen::Index>(f), k));
      os << buf;
    }
    os << "\n";
  }
}

void write_histogram_csv(const SimOutput& out, std::ostream& os) {
  os << "bin_left,bin_right,count\n";
  char buf[96];
  for (std::size_t b = 0; b < out.counts.size(); ++b) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%llu\n", out.edges[b], out.edges[b + 1],
                  static_cast<unsigned long long>(out.counts[b]));
    os << buf;
  }
}

}  // namespace mckean
