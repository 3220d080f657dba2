#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fixture_values.hpp"
#include "genmean/json_io.hpp"

using namespace genmean;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "genmean_cli_test";
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with stdout/stderr captured to files; returns the exit code.
int run_cli(const std::string& args, const std::string& env_prefix = "") {
  const fs::path dir = work_dir();
  std::string cmd = env_prefix + std::string(GENMEAN_CLI_PATH) + " " + args +
                    " > " + (dir / "stdout.txt").string() + " 2> " +
                    (dir / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string last_stderr() { return slurp(work_dir() / "stderr.txt"); }

MeasureSpacePtr pair_space() { return make_space({"a", "b"}, {1.0, 1.0}); }

}  // namespace

TEST_CASE("kernel lifts and recoveries round-trip through files") {
  const fs::path dir = work_dir();
  GridFunction u(pair_space(), 1, {2.0, 6.0});
  save_json_file(function_to_json(u), dir / "u.json");

  CHECK(run_cli("gmean --kernel " + (dir / "u.json").string() +
                " -N 2 -o " + (dir / "mean.json").string()) == 0);
  GridFunction mean = load_function(dir / "mean.json");
  CHECK(mean.values() == std::vector<double>{2.0, 4.0, 4.0, 6.0});

  CHECK(run_cli("kernel --mean " + (dir / "mean.json").string() +
                " -m 1 -o " + (dir / "back.json").string()) == 0);
  GridFunction back = load_function(dir / "back.json");
  CHECK(rel_max_dev(back, u) <= 1e-12);
}

TEST_CASE("a perturbed mean is refused with exit code 3") {
  const fs::path dir = work_dir();
  GridFunction u(pair_space(), 1, {2.0, 6.0});
  ordered_json doc = function_to_json(generalized_mean(u, 3));
  doc["values"][1] = doc["values"][1].get<double>() + 0.05;
  save_json_file(doc, dir / "bad_mean.json");

  CHECK(run_cli("kernel --mean " + (dir / "bad_mean.json").string() +
                " -m 1") == 3);
  const std::string err = last_stderr();
  CHECK(err.find("E_NOT_A_GENERALIZED_MEAN") != std::string::npos);
  CHECK(err.find("residual=") != std::string::npos);
}

TEST_CASE("symmetrize and marginal subcommands") {
  const fs::path dir = work_dir();
  GridFunction g(pair_space(), 2, {1.0, 2.0, 3.0, 4.0});
  save_json_file(function_to_json(g), dir / "g.json");
  CHECK(run_cli("symmetrize --function " + (dir / "g.json").string() +
                " -o " + (dir / "sym.json").string()) == 0);
  CHECK(load_function(dir / "sym.json").values() ==
        std::vector<double>{1.0, 2.5, 2.5, 4.0});

  auto space = make_space({"a", "b", "c"}, {0.25, 0.25, 0.5});
  SymmetricDensity rho(GridFunction(space, 1, {2.0, 1.0, 0.5}), true);
  SymmetricDensity pair = SymmetricDensity::product_power(rho, 2);
  save_json_file(density_to_json(pair), dir / "pair.json");
  CHECK(run_cli("marginal --density " + (dir / "pair.json").string() +
                " -k 1 -o " + (dir / "marg.json").string()) == 0);
  CHECK(load_density(dir / "marg.json").grid().values() ==
        rho.grid().values());
}

TEST_CASE("domination probe reports through the CLI") {
  const fs::path dir = work_dir();
  auto space = pair_space();
  SymmetricDensity uniform = SymmetricDensity::uniform(space, 2);
  save_json_file(density_to_json(uniform), dir / "uniform.json");
  CHECK(run_cli("check27 --density " + (dir / "uniform.json").string() +
                " -o " + (dir / "probe.json").string()) == 0);
  nlohmann::json probe = load_json_file(dir / "probe.json");
  CHECK(probe["holds"] == true);
  CHECK(probe["alpha"] == 2.0);

  SymmetricDensity dead(GridFunction(space, 2, {0.0, 1.0, 1.0, 0.0}), false);
  save_json_file(density_to_json(dead), dir / "dead.json");
  CHECK(run_cli("check27 --density " + (dir / "dead.json").string() +
                " -o " + (dir / "probe2.json").string()) == 0);
  CHECK(load_json_file(dir / "probe2.json")["holds"] == false);
}

TEST_CASE("perturb blends a density toward a product") {
  const fs::path dir = work_dir();
  auto space = pair_space();
  SymmetricDensity dead(GridFunction(space, 2, {0.0, 0.5, 0.5, 0.0}), true);
  SymmetricDensity rho(GridFunction(space, 1, {0.5, 0.5}), true);
  save_json_file(density_to_json(dead), dir / "dead_n.json");
  save_json_file(density_to_json(rho), dir / "rho.json");
  CHECK(run_cli("perturb --density " + (dir / "dead_n.json").string() +
                " --rho " + (dir / "rho.json").string() + " -n 4 -o " +
                (dir / "blend.json").string()) == 0);
  SymmetricDensity blend = load_density(dir / "blend.json");
  CHECK(blend.normalized());
  CHECK(blend.grid()[0] == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("example trace reproduces the frozen partial sums") {
  const fs::path dir = work_dir();
  CHECK(run_cli("example ex3 --M 1000 -o " + (dir / "ex3.json").string()) ==
        0);
  nlohmann::json trace = load_json_file(dir / "ex3.json");
  REQUIRE(trace["per_step"].size() == 2);
  CHECK(trace["per_step"][0]["M"] == 100.0);
  CHECK(trace["per_step"][0]["kernel_sum"].get<double>() ==
        doctest::Approx(fixtures::kBlockSumU_100).epsilon(1e-12));
  CHECK(trace["per_step"][1]["kernel_sum"].get<double>() ==
        doctest::Approx(fixtures::kBlockSumU_1000).epsilon(1e-12));
  CHECK(trace["per_step"][1]["mean_sum"].get<double>() ==
        doctest::Approx(fixtures::kBlockSumMean_1000).epsilon(1e-12));

  // A text summary accompanies the file output.
  CHECK(slurp(work_dir() / "stdout.txt").find("kernel L1 sum grows") !=
        std::string::npos);
}

TEST_CASE("the other bundled examples run clean") {
  CHECK(run_cli("example ex1") == 0);
  CHECK(run_cli("example ex2 --M 3") == 0);
  CHECK(run_cli("example ex4 --grid 8") == 0);
  CHECK(run_cli("example ex1 --grid 48") == 1);  // not a power of two
  CHECK(run_cli("example ex9") == 1);
}

TEST_CASE("budget failures exit with code 2") {
  const fs::path dir = work_dir();
  GridFunction u(pair_space(), 1, {2.0, 6.0});
  save_json_file(function_to_json(u), dir / "u2.json");
  const std::string args =
      "gmean --kernel " + (dir / "u2.json").string() + " -N 4";
  CHECK(run_cli(args + " --budget 10") == 2);
  CHECK(last_stderr().find("E_BUDGET_EXCEEDED") != std::string::npos);

  // The environment default is honored, and the flag overrides it.
  CHECK(run_cli(args, "GENMEAN_BUDGET=10 ") == 2);
  CHECK(run_cli(args + " --budget 1000", "GENMEAN_BUDGET=10 ") == 0);
  CHECK(run_cli(args, "GENMEAN_BUDGET=banana ") == 1);
}

TEST_CASE("seeded bound audits are byte-identical") {
  const fs::path dir = work_dir();
  const std::string base = "bounds -m 2 -N 3 --seed 99 --instances 3 -o ";
  CHECK(run_cli(base + (dir / "b1.json").string()) == 0);
  CHECK(run_cli(base + (dir / "b2.json").string()) == 0);
  const std::string first = slurp(dir / "b1.json");
  CHECK(!first.empty());
  CHECK(first == slurp(dir / "b2.json"));
  nlohmann::json report = load_json_file(dir / "b1.json");
  CHECK(report["all_ok"] == true);
  CHECK(report["checks"].size() == 3);
}

TEST_CASE("single-kernel audits report through the CLI") {
  const fs::path dir = work_dir();
  GridFunction u(pair_space(), 2, {0.0, 3.0, 3.0, 6.0});
  save_json_file(function_to_json(u), dir / "sym_u.json");
  CHECK(run_cli("verify --kernel " + (dir / "sym_u.json").string() +
                " -N 3 -o " + (dir / "audit.json").string()) == 0);
  nlohmann::json audit = load_json_file(dir / "audit.json");
  CHECK(audit["ok"] == true);
  CHECK(audit["r"] == "inf");
  CHECK(audit["constant"] == 7.0);

  SymmetricDensity uniform3 =
      SymmetricDensity::uniform(pair_space(), 3);
  save_json_file(density_to_json(uniform3), dir / "u3.json");
  CHECK(run_cli("verify --kernel " + (dir / "sym_u.json").string() +
                " -N 3 --density " + (dir / "u3.json").string() +
                " -r 1 -o " + (dir / "audit_r.json").string()) == 0);
  nlohmann::json weighted = load_json_file(dir / "audit_r.json");
  CHECK(weighted["ok"] == true);
  CHECK(weighted["constant"] == 97.0);
}

TEST_CASE("bad invocations exit with code 1") {
  CHECK(run_cli("") == 1);
  CHECK(run_cli("gmean") == 1);                        // missing options
  CHECK(run_cli("gmean --no-such-flag x -N 2") == 1);  // unknown flag
  CHECK(run_cli("gmean --kernel /does/not/exist.json -N 2") == 1);
  CHECK(last_stderr().find("E_INVALID_ARGUMENT") != std::string::npos);
  CHECK(run_cli("--help") == 0);
}
