#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = MCKEAN_CLI_PATH;
const std::string kConfigs = MCKEAN_CONFIG_DIR;

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("mckean_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const fs::path o = scratch() / "stdout.txt", e = scratch() / "stderr.txt";
  const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + o.string() + "\" 2> \"" + e.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

std::string cfg(const std::string& name) { return "\"" + kConfigs + "/" + name + "\""; }

}  // namespace

TEST_CASE("validate") {
  const Run ok = run("validate " + cfg("double_well_alpha1.json"));
  CHECK(ok.code == 0);
  const json j = json::parse(ok.out);
  CHECK(j["ok"] == true);
  CHECK(j["schema_version"] == 1);
  CHECK(run("validate " + cfg("double_well_alpha1.toml")).code == 0);
  CHECK(run("validate " + cfg("single_well.toml")).code == 1);
  CHECK(run("validate " + cfg("malformed.json")).code == 2);
  CHECK(run("validate /nonexistent/file.json").code == 2);
  CHECK(run("validate").code == 2);
  CHECK(run("no-such-command").code == 2);
}

TEST_CASE("cramer and condition") {
  const Run c = run("cramer " + cfg("stiff_quartic_interaction.json"));
  REQUIRE(c.code == 0);
  const json j = json::parse(c.out);
  CHECK(j["tau"][0].get<double>() == doctest::Approx(1.0 / 28.0));
  const Run k = run("condition " + cfg("shallow_pure_quartic.toml"));
  REQUIRE(k.code == 0);
  CHECK(json::parse(k.out)["condition"]["holds"] == false);
}

TEST_CASE("curve writes a symmetric grid and a manifest") {
  const fs::path out = scratch() / "curve.csv";
  const Run r = run("curve " + cfg("double_well_alpha1.json") + " --epsilon 0.25 --grid 21 --out \"" + out.string() + "\"");
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "m,chi0,chi_eps");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 21);
  const json man = json::parse(slurp(out.string() + ".manifest.json"));
  CHECK(man["command"] == "curve");
  CHECK(r.err.find("sign changes") != std::string::npos);
}

TEST_CASE("find-invariant") {
  const Run lin = run("find-invariant " + cfg("double_well_alpha1.json") + " --epsilon 0.1 --linear");
  REQUIRE(lin.code == 0);
  const json j = json::parse(lin.out);
  CHECK(j["means"].size() == 3);
  const Run gen = run("find-invariant " + cfg("stiff_quartic_interaction.json") + " --epsilon 0.05 --general");
  REQUIRE(gen.code == 0);
  const json g = json::parse(gen.out);
  CHECK(g["plus"]["converged"] == true);
  CHECK(run("find-invariant " + cfg("quartic_interaction.toml") + " --epsilon 0.1 --linear").code == 1);
  CHECK(run("find-invariant " + cfg("double_well_alpha1.json") + " --epsilon 0.1 --linear --general").code == 2);
}

TEST_CASE("simulate writes the three files") {
  const std::string prefix = (scratch() / "sim").string();
  const Run r = run("simulate " + cfg("double_well_alpha1.json") +
                    " --epsilon 0.25 --N 20 --T 1 --seed 3 --out \"" + prefix + "\"");
  REQUIRE(r.code == 0);
  CHECK(slurp(prefix + "_moments.csv").rfind("t,m1,m2\n", 0) == 0);
  CHECK(slurp(prefix + "_histogram.csv").rfind("bin_left,bin_right,count\n", 0) == 0);
  const json man = json::parse(slurp(prefix + "_manifest.json"));
  CHECK(man["command"] == "simulate");
  // Replay is byte-identical.
  const std::string first = slurp(prefix + "_moments.csv");
  REQUIRE(run("simulate " + cfg("double_well_alpha1.json") + " --epsilon 0.25 --N 20 --T 1 --seed 3 --out \"" +
              prefix + "\"")
              .code == 0);
  CHECK(slurp(prefix + "_moments.csv") == first);
}

TEST_CASE("laplace-check") {
  const fs::path out = scratch() / "laplace.csv";
  const Run r = run("laplace-check --epsilons 0.1,0.05,0.025 --out \"" + out.string() + "\"");
  CHECK(r.code == 0);
  CHECK(slurp(out).rfind("case,kind,n,status,slope,tail_slope,pass,residual_eps_", 0) == 0);
  CHECK(r.err.find("rows pass") != std::string::npos);
}
