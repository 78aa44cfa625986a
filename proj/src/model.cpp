#include "mckean/model.hpp"

#include <cmath>
#include <limits>

#include "mckean/roots.hpp"

namespace mckean {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int p) {
  double f = 1.0;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}
}  // namespace

PotentialReport validate_potential(const Poly& V) {
  PotentialReport r;
  auto fail = [&](std::string s) { r.violations.push_back(std::move(s)); };

  if (!V.is_even()) fail("V-2: V is not even (nonzero odd coefficient)");
  if (V.degree() < 4) fail("V-4: degree of V must be >= 4");
  if (V.leading() <= 0.0) fail("V-4: leading coefficient of V must be positive");
  if (V[0] != 0.0) fail("V-7: V(0) must be 0");

  const Poly dV = V.derivative();
  const Poly d2V = V.derivative(2);
  if (!dV.is_zero() && dV.degree() >= 1) {
    const auto roots = real_roots(dV);
    std::vector<double> pos;
    bool has_zero = false;
    for (const auto& rt : roots) {
      if (rt.x == 0.0) has_zero = true;
      if (rt.x > 0.0) pos.push_back(rt.x);
    }
    if (roots.size() != 3 || !has_zero || pos.size() != 1) {
      fail("V-3: V' must have exactly three real roots {-a, 0, a}; found " + std::to_string(roots.size()));
    } else {
      r.a = pos.front();
      if (!(d2V(r.a) > 0.0)) fail("V-3: V''(a) must be positive");
    }
  } else {
    fail("V-3: V' has no roots besides a constant");
  }
  if (!(d2V(0.0) < 0.0)) fail("V-3: V''(0) must be negative");

  if (V.leading() > 0.0 && V.degree() >= 2) {
    const PolyMinimum m = minimize_on(d2V, -kInf, kInf);
    if (m.bounded) r.theta = -m.value;
  }
  r.ok = r.violations.empty();
  return r;
}

InteractionReport validate_interaction(const Poly& F) {
  InteractionReport r;
  auto fail = [&](std::string s) { r.violations.push_back(std::move(s)); };

  if (!F.is_even()) fail("F-1: F is not even (nonzero odd coefficient)");
  if (F.degree() < 2 || F.degree() % 2 != 0) fail("F-1: F must have even degree >= 2");
  if (F[0] != 0.0) fail("F: F(0) must be 0");

  const Poly d2F = F.derivative(2);
  if (!nonnegative_on(d2F, -kInf, kInf)) fail("F-2: F is not convex (F'' < 0 somewhere)");
  const Poly d3F = F.derivative(3);
  if (!nonnegative_on(d3F, 0.0, kInf)) fail("F-3: F' is not convex on R+ (F''' < 0 somewhere on R+)");

  r.alpha = d2F(0.0);
  r.n = F.degree() / 2;
  r.ok = r.violations.empty();
  return r;
}

ModelSpec::ModelSpec(EvenPolynomial V, EvenPolynomial F) : V_(std::move(V)), F_(std::move(F)) {
  const PotentialReport pv = validate_potential(V_.poly());
  const InteractionReport pf = validate_interaction(F_.poly());
  if (!pv.ok || !pf.ok) {
    std::string msg;
    for (const auto& s : pv.violations) msg += s + "; ";
    for (const auto& s : pf.violations) msg += s + "; ";
    throw Error(ErrorCode::InvalidModel, msg);
  }
  a_ = pv.a;
  theta_ = pv.theta;
  alpha_ = pf.alpha;
  n_ = pf.n;
}

ConditionReport outlying_condition(const ModelSpec& spec) {
  ConditionReport r;
  const double a = spec.a();
  double ap = 1.0;
  for (int p = 0; p <= 2 * spec.n() - 2; ++p) {
    r.lhs += std::abs(spec.F().derivative(p + 2)(a)) * ap / factorial(p);
    ap *= a;
  }
  r.rhs = spec.alpha() + spec.V().derivative(2)(a);
  r.holds = r.lhs < r.rhs;
  return r;
}

Poly quartic_double_well() { return Poly({0.0, 0.0, -0.5, 0.0, 0.25}); }

}  // namespace mckean
