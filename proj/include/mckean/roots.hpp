#ifndef MCKEAN_ROOTS_HPP
#define MCKEAN_ROOTS_HPP

#include <vector>

#include "mckean/polynomial.hpp"

namespace mckean {

struct RealRoot {
  double x;
  int multiplicity;
};

/// Real roots of p, sorted ascending, clustered into distinct roots with multiplicities.
///
/// Candidates come from the eigenvalues of the companion matrix, are polished by
/// Newton steps on p^(mult-1), and merged when closer than `cluster_tol`*(1+|x|).
/// A candidate is kept only if |p(x)| is small relative to the coefficient scale.
std::vector<RealRoot> real_roots(const Poly& p, double cluster_tol = 1e-10);

/// Convenience: the distinct root locations only.
std::vector<double> real_root_values(const Poly& p, double cluster_tol = 1e-10);

/// Real critical points of p (roots of p').
std::vector<double> critical_points(const Poly& p);

/// Minimum of p over [lo, hi] (either bound may be infinite); returns +inf/-inf style
/// sentinel via `bounded` = false when p is unbounded below on the interval.
struct PolyMinimum {
  double x;
  double value;
  bool bounded;
};
PolyMinimum minimize_on(const Poly& p, double lo, double hi);

/// p >= -tol*scale(p) everywhere on [lo, hi].
bool nonnegative_on(const Poly& p, double lo, double hi, double tol = 1e-12);

/// Cauchy bound: every real root satisfies |x| <= root_bound(p).
double root_bound(const Poly& p);

}  // namespace mckean

#endif  // MCKEAN_ROOTS_HPP
