#include "mckean/laplace.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mckean/error.hpp"
#include "mckean/roots.hpp"

namespace mckean {
namespace {

void require_confining(const Poly& W) {
  if (W.degree() < 2 || W.degree() % 2 != 0 || W.leading() <= 0.0)
    throw Error(ErrorCode::NonconfiningPotential, "not confining: " + W.to_string());
}

GlobalMinimum nondegenerate_minimum(const Poly& U) {
  const GlobalMinimum g = global_minimizer(U);
  if (g.degenerate)
    throw Error(ErrorCode::DegenerateMinimum, "global minimum of " + U.to_string() + " is not unique or flat");
  return g;
}

}  // namespace

GlobalMinimum global_minimizer(const Poly& W) {
  require_confining(W);
  const std::vector<double> crit = critical_points(W);
  GlobalMinimum g;
  g.value = std::numeric_limits<double>::infinity();
  for (double c : crit) {
    const double v = W(c);
    if (v < g.value) {
      g.value = v;
      g.x_star = c;
    }
  }
  const Poly d2 = W.derivative(2);
  g.W2 = d2(g.x_star);
  const double tie = 1e-10 * (1.0 + std::abs(g.value));
  for (double c : crit)
    if (c != g.x_star && W(c) - g.value <= tie) g.degenerate = true;
  if (g.W2 <= 1e-12) g.degenerate = true;
  return g;
}

double tail_equivalent(const Poly& U, double x) {
  require_confining(U);
  const double d = U.derivative()(x);
  if (!(d > 0.0)) throw Error(ErrorCode::DomainError, "tail equivalent needs U'(x) > 0");
  return std::exp(-U(x)) / d;
}

double flat_minimum_integral(const Poly& U, double eps, double a, double b) {
  if (!(eps > 0.0) || !(b > a)) throw Error(ErrorCode::DomainError, "need eps > 0 and a < b");
  const PolyMinimum m = minimize_on(U, a, b);
  const double edge = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
  if (std::abs(m.x - a) <= edge || std::abs(m.x - b) <= edge)
    throw Error(ErrorCode::BoundaryMinimum, "minimum sits on the boundary of the interval");
  for (double c : critical_points(U))
    if (c > a && c < b && std::abs(c - m.x) > 1e-8 && U(c) - m.value <= 1e-10 * (1.0 + std::abs(m.value)))
      throw Error(ErrorCode::DegenerateMinimum, "minimum on the interval is not unique");

  // First derivative that does not vanish at the minimizer, judged on Taylor coefficients.
  const double zero = 1e-9 * std::max(1.0, U.scale()) * std::pow(std::max(1.0, std::abs(m.x)), U.degree());
  int order = 0;
  double deriv = 0.0, fact = 1.0;
  for (int k = 1; k <= U.degree(); ++k) {
    fact *= k;
    deriv = U.derivative(k)(m.x);
    if (std::abs(deriv) / fact > zero) {
      order = k;
      break;
    }
  }
  if (order == 0 || order % 2 != 0)
    throw Error(ErrorCode::OddOrderContact, "first nonvanishing derivative has odd order");
  const int k0 = order / 2;
  const double inv = 1.0 / order;
  return std::pow(eps * fact / deriv, inv) * std::tgamma(inv) * std::exp(-m.value / eps) / k0;
}

ExpansionResult laplace_integral_o2(const Poly& U, const Poly& f, double eps) {
  const GlobalMinimum g = nondegenerate_minimum(U);
  const double x = g.x_star;
  const double u2 = g.W2, u3 = U.derivative(3)(x), u4 = U.derivative(4)(x);
  const double f0 = f(x), f1 = f.derivative()(x), f2 = f.derivative(2)(x);
  const double gamma0 = f0 * (5.0 * u3 * u3 / (48.0 * u2 * u2 * u2) - u4 / (16.0 * u2 * u2)) -
                        f1 * u3 / (4.0 * u2 * u2) + f2 / (4.0 * u2);
  ExpansionResult r;
  r.minimizer = x;
  r.log_prefactor = 0.5 * std::log(std::numbers::pi * eps / u2) - 2.0 * g.value / eps;
  const double pre = std::exp(r.log_prefactor);
  r.leading = pre * f0;
  r.first_order_coeff = pre * gamma0;
  return r;
}

ExpansionResult laplace_moment_ratio(const Poly& U, const Poly& f, int n, double /*eps*/) {
  if (n < 1) throw Error(ErrorCode::DomainError, "moment order must be positive");
  const GlobalMinimum g = nondegenerate_minimum(U);
  const double x = g.x_star;
  if (n >= 2 && std::abs(x) <= 1e-12)
    throw Error(ErrorCode::ZeroMinimizer, "expansion undefined for n >= 2 at a minimizer at 0");
  const double u2 = g.W2, u3 = U.derivative(3)(x), f1 = f.derivative()(x);
  // n x^{n-1}(U3/U2 - 2f') - n(n-1) x^{n-2}, written so that n = 1 never divides by x.
  const double bracket =
      n * std::pow(x, n - 1) * (u3 / u2 - 2.0 * f1) - (n >= 2 ? n * (n - 1.0) * std::pow(x, n - 2) : 0.0);
  ExpansionResult r;
  r.minimizer = x;
  r.leading = std::pow(x, n);
  r.first_order_coeff = -bracket / (4.0 * u2);
  return r;
}

PerturbedMinimizer perturbed_minimizer(const Poly& U, const Poly& G, double mu, double eta) {
  const GlobalMinimum g = nondegenerate_minimum(U);
  PerturbedMinimizer p;
  p.predicted = g.x_star - mu * G.derivative()(g.x_star) / g.W2 * eta;
  p.exact = global_minimizer(U + (eta * mu) * G).x_star;
  return p;
}

ExpansionResult perturbed_ratio(const Poly& U, const std::vector<Poly>& G, const std::vector<double>& mu,
                                const Poly& f, double /*eta*/) {
  if (G.size() != mu.size()) throw Error(ErrorCode::LengthMismatch, "G and mu lists differ in length");
  const GlobalMinimum g = nondegenerate_minimum(U);
  double tilt = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i) tilt += mu[i] * G[i].derivative()(g.x_star);
  ExpansionResult r;
  r.minimizer = g.x_star;
  r.leading = f(g.x_star);
  r.first_order_coeff = -f.derivative()(g.x_star) * tilt / g.W2;
  return r;
}

}  // namespace mckean
