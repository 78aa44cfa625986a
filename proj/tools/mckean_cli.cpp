// Command-line front end: model validation, fixed-point solvers, curves for the
// linear example, particle runs and the Laplace validation table.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mckean/error.hpp"
#include "mckean/general_case.hpp"
#include "mckean/laplace_check.hpp"
#include "mckean/linear_case.hpp"
#include "mckean/model.hpp"
#include "mckean/particle_sim.hpp"

using nlohmann::json;
using namespace mckean;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kModel = 1, kIo = 2, kSolver = 3 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError: return kIo;
    case ErrorCode::ToleranceNotReached:
    case ErrorCode::NotConverged:
    case ErrorCode::SingularSystem:
    case ErrorCode::Blowup: return kSolver;
    default: return kModel;
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct Run {
  std::string command;
  json config = json::object();
  std::string started = utc_now();

  json manifest() const {
    return {{"schema_version", kSchemaVersion}, {"command", command},    {"tool_version", kToolVersion},
            {"config", config},                 {"started_utc", started}, {"finished_utc", utc_now()}};
  }
};

ModelFile read_model(const std::string& path) { return load_model_file(path); }

ModelSpec load_spec(const std::string& path) {
  const ModelFile mf = read_model(path);
  return ModelSpec(EvenPolynomial(Poly(mf.V)), EvenPolynomial(Poly(mf.F)));
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + out + "'");
  f << j.dump(2) << "\n";
}

json condition_json(const ConditionReport& c) { return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}}; }

json report_json(const FixedPointReport& r) {
  return {{"branch", to_string(r.branch)},       {"m", to_json(r.m_star)},
          {"residual", r.residual},              {"iterations", r.iterations},
          {"newton_iterations", r.newton_iterations}, {"converged", r.converged},
          {"inside_box", r.inside_box}};
}

// ---- commands ----

int cmd_validate(const std::string& path) {
  const ModelFile mf = read_model(path);
  const PotentialReport pv = validate_potential(Poly(mf.V));
  const InteractionReport pf = validate_interaction(Poly(mf.F));
  Run run{"validate", {{"config_path", path}}};
  json j = run.manifest();
  j["V"] = {{"ok", pv.ok}, {"a", pv.a}, {"theta", pv.theta}, {"violations", pv.violations}};
  j["F"] = {{"ok", pf.ok}, {"alpha", pf.alpha}, {"n", pf.n}, {"violations", pf.violations}};
  j["ok"] = pv.ok && pf.ok;
  emit(j, "");
  return pv.ok && pf.ok ? kOk : kModel;
}

struct CurveArgs {
  std::string config, out;
  double alpha = std::nan("");
  double eps = 0.25;
  int grid = 201;
  double mmax = 0.0;
};

int cmd_curve(const CurveArgs& a) {
  const ModelFile mf = read_model(a.config);
  double alpha = a.alpha;
  if (std::isnan(alpha)) alpha = load_spec(a.config).alpha();
  const LinearCaseConfig cfg = linear_config(Poly(mf.V), alpha, a.eps);
  if (a.grid < 2) throw Error(ErrorCode::InvalidConfig, "grid needs at least two points");
  const double mmax = a.mmax > 0.0 ? a.mmax : 1.5 * cfg.a;

  std::ostringstream csv;
  csv << "m,chi0,chi_eps\n";
  int changes = 0;
  double prev = 0.0;
  for (int i = 0; i < a.grid; ++i) {
    // Built from both ends so the grid is exactly symmetric about 0.
    const double m = (2 * i == a.grid - 1) ? 0.0 : mmax * (2.0 * i - (a.grid - 1)) / (a.grid - 1);
    const double c = chi(cfg, m);
    csv << fmt(m) << "," << fmt(chi0(cfg, m)) << "," << fmt(c) << "\n";
    if (c != 0.0) {
      if (prev != 0.0 && (c > 0.0) != (prev > 0.0)) ++changes;
      prev = c;
    }
  }
  Run run{"curve", {{"config_path", a.config}, {"alpha", alpha}, {"epsilon", a.eps}, {"grid", a.grid}, {"mmax", mmax}}};
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + a.out + "'");
    f << csv.str();
    json man = run.manifest();
    man["sign_changes_chi_eps"] = changes;
    emit(man, a.out + ".manifest.json");
  }
  std::cerr << "sign changes of chi_eps: " << changes << "\n";
  return kOk;
}

struct FindArgs {
  std::string config, out;
  double eps = 0.0;
  bool linear = false, general = false;
};

int find_linear(const ModelSpec& spec, const FindArgs& a, Run& run) {
  const LinearCaseConfig cfg = linear_config(spec, a.eps);
  const InvariantMeanSet set = find_invariant_means(cfg);
  const FirstOrderMean fo = first_order_mean(spec);
  json roots = json::array();
  for (const auto& r : set.roots)
    roots.push_back({{"m", r.m},
                     {"chi_prime", r.chi_prime},
                     {"attracting", r.attracting},
                     {"residual", invariant_density(cfg, r.m).residual}});
  json warnings = json::array();
  if (set.multiple_positive_roots) warnings.push_back("more than one positive root found");
  if (!set.near_roots.empty()) warnings.push_back("near-root: |chi| < 1e-8 without a sign change");
  json j = run.manifest();
  j["mode"] = "linear";
  j["epsilon"] = a.eps;
  j["alpha"] = spec.alpha();
  j["a"] = spec.a();
  j["means"] = set.means;
  j["roots"] = roots;
  j["near_roots"] = set.near_roots;
  j["warnings"] = warnings;
  j["prediction"] = {{"tau0", fo.tau0}, {"m_predicted", fo.predict(a.eps)}};
  j["condition"] = condition_json(outlying_condition(spec));
  emit(j, a.out);
  return kOk;
}

int find_general(const ModelSpec& spec, const FindArgs& a, Run& run) {
  const SolverOptions opt;
  const OutlyingPair pair = find_outlying_moments(spec, a.eps, opt);
  const FixedPointReport sym = symmetric_invariant(spec, a.eps, opt);
  const CramerTau ct = cramer_tau(spec);
  json warnings = json::array();
  if (!pair.condition.holds) warnings.push_back("ConditionViolated: sufficient condition for outlying measures fails");
  json j = run.manifest();
  j["mode"] = "general";
  j["epsilon"] = a.eps;
  j["a"] = spec.a();
  j["alpha"] = spec.alpha();
  j["n"] = spec.n();
  j["plus"] = report_json(pair.plus);
  j["minus"] = report_json(pair.minus);
  j["symmetric"] = report_json(sym);
  j["predicted"] = to_json(pair.predicted);
  j["cramer"] = {{"tau", to_json(ct.tau)}, {"closed_form", to_json(ct.closed_form)}};
  j["condition"] = condition_json(pair.condition);
  j["eta"] = {{"value", pair.eta}, {"convention", "eta = sqrt(eps)"}, {"box_delta", opt.box_delta}};
  j["warnings"] = warnings;
  j["notes"] = {"local search near +-(a, ..., a^(2n-1)) and the symmetric branch; other fixed points are not excluded"};
  emit(j, a.out);
  return pair.plus.converged && pair.minus.converged && sym.converged ? kOk : kSolver;
}

int cmd_find_invariant(const FindArgs& a) {
  if (!(a.eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "--epsilon must be positive");
  const ModelSpec spec = load_spec(a.config);
  Run run{"find-invariant", {{"config_path", a.config}, {"epsilon", a.eps}}};
  const bool general = a.general || (!a.linear && spec.n() != 1);
  run.config["mode"] = general ? "general" : "linear";
  return general ? find_general(spec, a, run) : find_linear(spec, a, run);
}

int cmd_cramer(const std::string& path) {
  const ModelSpec spec = load_spec(path);
  const CramerTau ct = cramer_tau(spec);
  Run run{"cramer", {{"config_path", path}}};
  json j = run.manifest();
  j["tau"] = to_json(ct.tau);
  j["closed_form"] = to_json(ct.closed_form);
  j["max_discrepancy"] = ct.max_discrepancy;
  j["alpha_identity"] = ct.alpha_identity;
  j["alpha"] = spec.alpha();
  emit(j, "");
  return kOk;
}

int cmd_condition(const std::string& path) {
  const ModelSpec spec = load_spec(path);
  Run run{"condition", {{"config_path", path}}};
  json j = run.manifest();
  j["condition"] = condition_json(outlying_condition(spec));
  emit(j, "");
  return kOk;
}

struct SimArgs {
  std::string config, out;
  double eps = 0.0, dt = 0.0, T = 100.0, burn_in = -1.0;
  double x0 = std::nan("");
  int N = 1000, bins = 60, record_every = 1;
  std::uint64_t seed = 1;
  bool compare = false;
};

// Solver density on the branch the run was started in.
GibbsDensity branch_density(const ModelSpec& spec, double eps, double x0, std::string& label) {
  if (spec.n() == 1) {
    const LinearCaseConfig cfg = linear_config(spec, eps);
    const InvariantMeanSet set = find_invariant_means(cfg);
    double m = 0.0;
    if (x0 > 0.0) m = set.means.back();
    if (x0 < 0.0) m = set.means.front();
    label = x0 > 0.0 ? "plus" : x0 < 0.0 ? "minus" : "symmetric";
    return invariant_density(cfg, m).density;
  }
  if (x0 == 0.0) {
    label = "symmetric";
    return GibbsDensity(effective_potential(spec, symmetric_invariant(spec, eps).m_star), eps);
  }
  const OutlyingPair pair = find_outlying_moments(spec, eps);
  label = x0 > 0.0 ? "plus" : "minus";
  return GibbsDensity(effective_potential(spec, x0 > 0.0 ? pair.plus.m_star : pair.minus.m_star), eps);
}

int cmd_simulate(const SimArgs& a) {
  const ModelSpec spec = load_spec(a.config);
  SimConfig cfg = sim_config(spec, a.eps, a.T);
  cfg.N = a.N;
  cfg.dt = a.dt;
  cfg.burn_in = a.burn_in;
  cfg.x0 = {std::isnan(a.x0) ? spec.a() : a.x0};
  cfg.seed = a.seed;
  cfg.hist_bins = a.bins;
  cfg.hist_lo = -(spec.a() + 2.0);
  cfg.hist_hi = spec.a() + 2.0;
  cfg.record_every = a.record_every;
  const SimOutput out = simulate(cfg);

  const std::string mpath = a.out + "_moments.csv", hpath = a.out + "_histogram.csv";
  {
    std::ofstream f(mpath);
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + mpath + "'");
    write_moment_csv(out, f);
  }
  {
    std::ofstream f(hpath);
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + hpath + "'");
    write_histogram_csv(out, f);
  }

  Run run{"simulate",
          {{"config_path", a.config}, {"epsilon", a.eps}, {"N", cfg.N}, {"dt", out.dt}, {"T", cfg.T},
           {"burn_in", out.burn_in}, {"x0", cfg.x0[0]}, {"seed", cfg.seed}, {"hist_bins", cfg.hist_bins},
           {"hist_range", {cfg.hist_lo, cfg.hist_hi}}, {"record_every", cfg.record_every}, {"mode", "sequential"}}};
  json j = run.manifest();
  j["files"] = {mpath, hpath};
  j["stationary_moments"] = to_json(out.stationary_moments);
  j["stderr"] = to_json(out.stderr_moments);
  j["stationary_frames"] = out.stationary_frames;
  if (a.compare) {
    std::string label;
    const GibbsDensity d = branch_density(spec, a.eps, cfg.x0[0], label);
    const EmpiricalComparison c = empirical_vs_density(out, d);
    json within = json::array();
    for (Eigen::Index k = 0; k < c.moment_distances.size(); ++k)
      within.push_back(c.moment_distances(k) <= 3.0 * out.stderr_moments(k) + 0.02);
    j["comparison"] = {{"branch", label},
                       {"solver_moments", to_json(d.moments(out.moment_count).tail(out.moment_count))},
                       {"moment_distances", to_json(c.moment_distances)},
                       {"within_3se_plus_0.02", within},
                       {"sup_cdf_distance", c.sup_cdf_distance}};
  }
  emit(j, a.out + "_manifest.json");
  std::cout << j.dump(2) << "\n";
  return kOk;
}

struct LaplaceArgs {
  std::string suite = "default", out;
  std::vector<double> eps;
  int count = 24;
  std::uint64_t seed = 1;
};

int cmd_laplace_check(const LaplaceArgs& a) {
  const std::vector<double> eps = a.eps.empty() ? halving_epsilons() : a.eps;
  if (eps.size() < 2) throw Error(ErrorCode::InvalidConfig, "need at least two epsilons");
  std::vector<LaplaceCase> cases;
  if (a.suite == "default")
    cases = default_laplace_suite();
  else if (a.suite == "random")
    cases = random_laplace_suite(a.count, a.seed);
  else
    throw Error(ErrorCode::InvalidConfig, "unknown suite '" + a.suite + "'");

  std::ostringstream csv;
  csv << "case,kind,n,status,slope,tail_slope,pass";
  for (double e : eps) csv << ",residual_eps_" << fmt(e);
  csv << "\n";
  int passed = 0;
  for (const auto& c : cases) {
    const LaplaceCheckRow r = run_laplace_case(c, eps);
    passed += r.pass;
    const bool has_slope = r.status == "slope";
    csv << c.name << "," << c.kind << "," << c.n << "," << r.status << "," << (has_slope ? fmt(r.slope) : "")
        << "," << (has_slope ? fmt(r.tail_slope) : "") << "," << (r.pass ? "true" : "false");
    for (std::size_t i = 0; i < eps.size(); ++i) csv << "," << (i < r.residual.size() ? fmt(r.residual[i]) : "");
    csv << "\n";
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(a.out);
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + a.out + "'");
    f << csv.str();
    Run run{"laplace-check", {{"suite", a.suite}, {"epsilons", eps}, {"count", a.count}, {"seed", a.seed}}};
    emit(run.manifest(), a.out + ".manifest.json");
  }
  std::cerr << passed << "/" << cases.size() << " rows pass\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant measures of self-stabilizing diffusions in a double-well potential"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string path;
  auto* validate = app.add_subcommand("validate", "Check V and F against the model assumptions");
  validate->add_option("config", path, "Model file (JSON or TOML)")->required();

  CurveArgs curve;
  auto* c = app.add_subcommand("curve", "CSV of m, chi0(m), chi_eps(m) for the linear interaction");
  c->add_option("config", curve.config, "Model file")->required();
  c->add_option("--alpha", curve.alpha, "Interaction strength; defaults to F''(0) of the model");
  c->add_option("--epsilon", curve.eps, "Noise intensity")->capture_default_str();
  c->add_option("--grid", curve.grid, "Number of grid points (odd includes m = 0)")->capture_default_str();
  c->add_option("--mmax", curve.mmax, "Grid half-width; defaults to 1.5 a");
  c->add_option("--out", curve.out, "Output CSV (stdout if omitted)");

  FindArgs find;
  auto* f = app.add_subcommand("find-invariant", "Locate invariant measures as fixed points");
  f->add_option("config", find.config, "Model file")->required();
  f->add_option("--epsilon", find.eps, "Noise intensity")->required();
  auto* lin = f->add_flag("--linear", find.linear, "Scalar mean equation (requires deg F = 2)");
  f->add_flag("--general", find.general, "Moment-vector fixed points")->excludes(lin);
  f->add_option("--out", find.out, "Output JSON (stdout if omitted)");

  auto* cr = app.add_subcommand("cramer", "First-order corrections tau_k by linear solve and closed form");
  cr->add_option("config", path, "Model file")->required();

  auto* co = app.add_subcommand("condition", "Sufficient condition for outlying invariant measures");
  co->add_option("config", path, "Model file")->required();

  SimArgs sim;
  auto* s = app.add_subcommand("simulate", "Euler-Maruyama run of the particle system");
  s->add_option("config", sim.config, "Model file")->required();
  s->add_option("--epsilon", sim.eps, "Noise intensity")->required();
  s->add_option("--N", sim.N, "Particle count")->capture_default_str();
  s->add_option("--dt", sim.dt, "Time step; default min(0.01, 0.1 eps)");
  s->add_option("--T", sim.T, "Horizon")->capture_default_str();
  s->add_option("--burn-in", sim.burn_in, "Discarded initial time; default T/5");
  s->add_option("--x0", sim.x0, "Initial position of every particle; default a");
  s->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  s->add_option("--bins", sim.bins, "Histogram bins")->capture_default_str();
  s->add_option("--record-every", sim.record_every, "Steps between recorded frames")->capture_default_str();
  s->add_option("--out", sim.out, "Output prefix")->required();
  s->add_flag("--compare", sim.compare, "Compare with the solver density of the starting branch");

  LaplaceArgs lap;
  auto* l = app.add_subcommand("laplace-check", "Expansion versus quadrature convergence table");
  l->add_option("--suite", lap.suite, "default or random")->capture_default_str();
  l->add_option("--epsilons", lap.eps, "Epsilon list; default 0.1 halved down to 1e-3")->delimiter(',');
  l->add_option("--count", lap.count, "Cases in the random suite")->capture_default_str();
  l->add_option("--seed", lap.seed, "Seed for the random suite")->capture_default_str();
  l->add_option("--out", lap.out, "Output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kIo;
  }

  try {
    if (validate->parsed()) return cmd_validate(path);
    if (c->parsed()) return cmd_curve(curve);
    if (f->parsed()) return cmd_find_invariant(find);
    if (cr->parsed()) return cmd_cramer(path);
    if (co->parsed()) return cmd_condition(path);
    if (s->parsed()) return cmd_simulate(sim);
    if (l->parsed()) return cmd_laplace_check(lap);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kOk;
}
