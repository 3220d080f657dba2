// Batch front end: wires JSON documents on disk to the library operations
// and emits machine-readable reports. Exit codes: 0 success, 1 invalid
// input, 2 budget exceeded, 3 tolerance failures (non-mean input, failed
// bound audit, or no positive domination constant).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genmean/genmean.hpp"

namespace {

namespace fs = std::filesystem;
using genmean::ordered_json;

std::size_t env_budget() {
  const char* raw = std::getenv("GENMEAN_BUDGET");
  if (raw == nullptr || *raw == '\0') {
    return genmean::kDefaultBudget;
  }
  try {
    const long long value = std::stoll(raw);
    if (value < 1) {
      throw std::invalid_argument("non-positive");
    }
    return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    genmean::fail(genmean::Errc::InvalidArgument,
                  std::string("GENMEAN_BUDGET is not a positive integer: ") +
                      raw);
  }
}

// Shared per-subcommand settings. The budget default comes from
// GENMEAN_BUDGET when set; --budget overrides both.
struct CommonOpts {
  std::size_t budget = 0;
  std::string out;

  void attach(CLI::App* cmd) {
    budget = env_budget();
    cmd->add_option("--budget", budget,
                    "Max grid entries an operation may allocate");
    cmd->add_option("-o,--out", out, "Output path (default: stdout)");
  }
};

void emit(const ordered_json& doc, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    genmean::save_json_file(doc, out);
  }
}

genmean::GridFunction load_function_doc(const std::string& path,
                                        const std::string& space_override) {
  if (space_override.empty()) {
    return genmean::load_function(path);
  }
  const nlohmann::json doc = genmean::load_json_file(path);
  nlohmann::json patched = doc;
  patched["space"] = genmean::load_json_file(space_override);
  return genmean::function_from_json(patched,
                                     fs::path(path).parent_path());
}

genmean::AnchorSelection parse_anchors(const std::vector<std::size_t>& list) {
  genmean::AnchorSelection anchors;
  if (!list.empty()) {
    anchors.anchor_atoms = list;
    anchors.secondary_point = list;
  }
  return anchors;
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") {
    return genmean::kSupExponent;
  }
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    genmean::fail(genmean::Errc::BadExponent,
                  "exponent must be a number or \"inf\": " + text);
  }
}

int run_bounds(int order, int n_slots, const std::string& density_path,
               const std::string& exponent_text, std::uint64_t seed,
               int instances, const CommonOpts& common) {
  const double exponent = parse_exponent(exponent_text);
  std::optional<genmean::SymmetricDensity> density;
  if (!density_path.empty()) {
    density = genmean::load_density(density_path);
  }
  const genmean::SymmetricDensity* density_ptr =
      density ? &*density : nullptr;

  ordered_json doc;
  doc["seed"] = seed;
  doc["instances"] = instances;
  doc["constants"] = genmean::bound_table_to_json(
      genmean::build_bound_table(order, n_slots, density_ptr, exponent));

  genmean::Rng rng(seed);
  genmean::MeasureSpacePtr space =
      density ? density->grid().space_ptr() : genmean::random_space(3, rng);
  bool all_ok = true;
  ordered_json checks = ordered_json::array();
  for (int i = 0; i < instances; ++i) {
    const genmean::GridFunction kernel =
        genmean::random_symmetric_function(space, order, rng);
    const genmean::BoundCheckReport report = genmean::verify_bounds(
        kernel, n_slots, density_ptr, exponent,
        genmean::random_anchors(space->size(), n_slots, rng), common.budget);
    all_ok = all_ok && report.ok();
    checks.push_back(genmean::bound_check_to_json(report));
  }
  doc["checks"] = std::move(checks);
  doc["all_ok"] = all_ok;
  emit(doc, common.out);
  return all_ok ? 0 : 3;
}

int run_example(const std::string& which, int grid_n, int steps, int blocks_m,
                const CommonOpts& common) {
  ordered_json doc;
  std::string summary;
  if (which == "ex1") {
    const genmean::ConvergenceTrace trace =
        genmean::typewriter_trace(grid_n, steps);
    doc = genmean::trace_to_json(trace);
    const auto& last = trace.per_step.back();
    double below = 0.0;
    for (const auto& [key, value] : last) {
      if (key == "below_mean_frac") {
        below = value;
      }
    }
    summary = "typewriter on " + std::to_string(grid_n) + " cells, " +
              std::to_string(steps) +
              " steps: kernel values oscillate between 0 and 2k on every "
              "cell; final mass fraction of pairs with mean below k = " +
              std::to_string(below);
  } else if (which == "ex2") {
    const genmean::BlockKernelInstance instance =
        genmean::alternating_block_kernel(blocks_m);
    const auto [u_min, u_max] = genmean::ess_bounds(instance.kernel);
    const genmean::GridFunction mean =
        genmean::generalized_mean(instance.kernel, 3, common.budget);
    const auto [mean_min, mean_max] = genmean::ess_bounds(mean);
    genmean::ConvergenceTrace trace;
    trace.steps.push_back(blocks_m);
    trace.per_step.push_back({{"u_min", u_min},
                              {"u_max", u_max},
                              {"mean3_min", mean_min},
                              {"mean3_max", mean_max}});
    trace.meta.push_back({"blocks", static_cast<double>(2 * blocks_m + 1)});
    doc = genmean::trace_to_json(trace);
    summary = "alternating block kernel, M=" + std::to_string(blocks_m) +
              ": min u = " + std::to_string(u_min) +
              " yet min of the 3-argument order-2 mean = " +
              std::to_string(mean_min);
  } else if (which == "ex3") {
    std::vector<int> checkpoints;
    for (int c = 100; c < blocks_m; c *= 10) {
      checkpoints.push_back(c);
    }
    if (checkpoints.empty() || checkpoints.back() != blocks_m) {
      checkpoints.push_back(blocks_m);
    }
    const genmean::ConvergenceTrace trace =
        genmean::banded_block_sums(checkpoints);
    doc = genmean::trace_to_json(trace);
    const auto& first = trace.per_step.front();
    const auto& last = trace.per_step.back();
    auto stat = [](const std::vector<std::pair<std::string, double>>& row,
                   const char* key) {
      for (const auto& [k, v] : row) {
        if (k == key) {
          return v;
        }
      }
      return 0.0;
    };
    summary =
        "banded block sums up to M=" + std::to_string(blocks_m) +
        ": kernel L1 sum grows " + std::to_string(stat(first, "kernel_sum")) +
        " -> " + std::to_string(stat(last, "kernel_sum")) +
        " while the mean L1 sum stays " +
        std::to_string(stat(first, "mean_sum")) + " -> " +
        std::to_string(stat(last, "mean_sum"));
  } else if (which == "ex4") {
    const genmean::SymmetricDensity density =
        genmean::diagonal_vanishing_density(grid_n);
    const genmean::Cond27Report report = genmean::check_cond27(density);
    double gamma_max = 0.0;
    for (double g : report.gamma) {
      gamma_max = std::max(gamma_max, g);
    }
    const auto [p1_min, p1_max] =
        genmean::ess_bounds(genmean::reduce(density, 1).grid());
    genmean::ConvergenceTrace trace;
    trace.steps.push_back(grid_n);
    trace.per_step.push_back({{"holds", report.holds ? 1.0 : 0.0},
                              {"gamma_max", gamma_max},
                              {"marginal_min", p1_min},
                              {"marginal_max", p1_max}});
    trace.meta.push_back({"grid_n", static_cast<double>(grid_n)});
    doc = genmean::trace_to_json(trace);
    summary = "distance density on " + std::to_string(grid_n) +
              " cells: marginal min = " + std::to_string(p1_min) +
              " > 0, yet every domination constant is " +
              std::to_string(gamma_max);
  } else {
    genmean::fail(genmean::Errc::InvalidArgument,
                  "unknown example: " + which);
  }

  emit(doc, common.out);
  if (!common.out.empty() && common.out != "-") {
    std::cout << summary << '\n';
  }
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Generalized-mean operators on finite atomic measure spaces"};
  app.require_subcommand(1);

  // gmean
  auto* gmean = app.add_subcommand(
      "gmean", "Lift a kernel to its generalized mean");
  CommonOpts gmean_common;
  std::string gmean_kernel, gmean_space;
  int gmean_slots = 0;
  gmean->add_option("--kernel", gmean_kernel, "Kernel function JSON")
      ->required();
  gmean->add_option("-N,--slots", gmean_slots, "Number of mean arguments")
      ->required();
  gmean->add_option("--space", gmean_space, "Space JSON overriding the doc");
  gmean_common.attach(gmean);

  // kernel
  auto* kernel_cmd = app.add_subcommand(
      "kernel", "Recover the kernel of a generalized mean");
  CommonOpts kernel_common;
  std::string kernel_mean;
  int kernel_order = 0;
  double kernel_tol = 0.0;
  std::vector<std::size_t> kernel_anchor_list;
  kernel_cmd->add_option("--mean", kernel_mean, "Mean function JSON")
      ->required();
  kernel_cmd->add_option("-m,--order", kernel_order, "Kernel order")
      ->required();
  kernel_cmd->add_option("--tol", kernel_tol,
                         "Round-trip tolerance (0 = default for the order)");
  kernel_cmd->add_option("--anchors", kernel_anchor_list,
                         "Comma list of anchor atom indices")
      ->delimiter(',');
  kernel_common.attach(kernel_cmd);

  // symmetrize
  auto* symmetrize_cmd =
      app.add_subcommand("symmetrize", "Symmetrize a grid function");
  CommonOpts symmetrize_common;
  std::string symmetrize_path;
  symmetrize_cmd
      ->add_option("--function", symmetrize_path, "Function JSON")
      ->required();
  symmetrize_common.attach(symmetrize_cmd);

  // marginal
  auto* marginal_cmd = app.add_subcommand(
      "marginal", "Marginal of a symmetric density on leading coordinates");
  CommonOpts marginal_common;
  std::string marginal_density;
  int marginal_keep = 0;
  marginal_cmd->add_option("--density", marginal_density, "Density JSON")
      ->required();
  marginal_cmd->add_option("-k,--keep", marginal_keep, "Coordinates to keep")
      ->required();
  marginal_common.attach(marginal_cmd);

  // check27
  auto* check_cmd = app.add_subcommand(
      "check27", "Probe a density for the domination condition");
  CommonOpts check_common;
  std::string check_density;
  double check_zero_tol = 1e-12;
  check_cmd->add_option("--density", check_density, "Density JSON")
      ->required();
  check_cmd->add_option("--zero-tol", check_zero_tol,
                        "Positivity gate for marginals and gammas");
  check_common.attach(check_cmd);

  // perturb
  auto* perturb_cmd = app.add_subcommand(
      "perturb", "Blend a density with a product density");
  CommonOpts perturb_common;
  std::string perturb_density, perturb_rho;
  int perturb_steps = 0;
  perturb_cmd->add_option("--density", perturb_density, "Density JSON")
      ->required();
  perturb_cmd->add_option("--rho", perturb_rho, "Arity-1 density JSON")
      ->required();
  perturb_cmd->add_option("-n,--steps", perturb_steps, "Blend step count")
      ->required();
  perturb_common.attach(perturb_cmd);

  // bounds
  auto* bounds_cmd = app.add_subcommand(
      "bounds", "Bound-constant tables plus a randomized audit");
  CommonOpts bounds_common;
  int bounds_order = 0, bounds_slots = 0, bounds_instances = 100;
  std::string bounds_density, bounds_exponent = "inf";
  std::uint64_t bounds_seed = 12345;
  bounds_cmd->add_option("-m,--order", bounds_order, "Kernel order")
      ->required();
  bounds_cmd->add_option("-N,--slots", bounds_slots, "Mean arguments")
      ->required();
  bounds_cmd->add_option("--density", bounds_density,
                         "Density JSON (enables weighted-norm constants)");
  bounds_cmd->add_option("-r,--exponent", bounds_exponent,
                         "Norm exponent, a number or \"inf\"");
  bounds_cmd->add_option("--seed", bounds_seed, "Randomized-suite seed");
  bounds_cmd->add_option("--instances", bounds_instances,
                         "Randomized-suite size");
  bounds_common.attach(bounds_cmd);

  // example
  auto* example_cmd = app.add_subcommand(
      "example", "Run a bundled demonstration (ex1|ex2|ex3|ex4)");
  CommonOpts example_common;
  std::string example_name;
  int example_grid = 0, example_steps = 0, example_m = 0;
  example_cmd->add_option("name", example_name, "One of ex1, ex2, ex3, ex4")
      ->required();
  example_cmd->add_option("--grid", example_grid,
                          "Grid size (ex1 default 64, ex4 default 16)");
  example_cmd->add_option("--steps", example_steps, "Steps (ex1 default 63)");
  example_cmd->add_option("--M", example_m,
                          "Truncation (ex2 default 5, ex3 default 1000)");
  example_common.attach(example_cmd);

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "Audit the transfer bounds for one kernel");
  CommonOpts verify_common;
  std::string verify_kernel, verify_density, verify_exponent = "inf";
  int verify_slots = 0;
  std::vector<std::size_t> verify_anchor_list;
  verify_cmd->add_option("--kernel", verify_kernel, "Kernel function JSON")
      ->required();
  verify_cmd->add_option("-N,--slots", verify_slots, "Mean arguments")
      ->required();
  verify_cmd->add_option("--density", verify_density, "Density JSON");
  verify_cmd->add_option("-r,--exponent", verify_exponent,
                         "Norm exponent, a number or \"inf\"");
  verify_cmd->add_option("--anchors", verify_anchor_list,
                         "Comma list of anchor atom indices")
      ->delimiter(',');
  verify_common.attach(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (gmean->parsed()) {
    const genmean::GridFunction kernel =
        load_function_doc(gmean_kernel, gmean_space);
    const genmean::GridFunction mean =
        genmean::generalized_mean(kernel, gmean_slots, gmean_common.budget);
    emit(genmean::function_to_json(mean), gmean_common.out);
    return 0;
  }
  if (kernel_cmd->parsed()) {
    const genmean::GridFunction mean = genmean::load_function(kernel_mean);
    const genmean::GridFunction kernel = genmean::require_kernel(
        mean, kernel_order, kernel_tol, parse_anchors(kernel_anchor_list),
        kernel_common.budget);
    emit(genmean::function_to_json(kernel), kernel_common.out);
    return 0;
  }
  if (symmetrize_cmd->parsed()) {
    const genmean::GridFunction f = genmean::load_function(symmetrize_path);
    emit(genmean::function_to_json(
             genmean::symmetrize(f, symmetrize_common.budget)),
         symmetrize_common.out);
    return 0;
  }
  if (marginal_cmd->parsed()) {
    const genmean::SymmetricDensity density =
        genmean::load_density(marginal_density);
    emit(genmean::density_to_json(genmean::reduce(density, marginal_keep)),
         marginal_common.out);
    return 0;
  }
  if (check_cmd->parsed()) {
    const genmean::SymmetricDensity density =
        genmean::load_density(check_density);
    emit(genmean::report_to_json(
             genmean::check_cond27(density, check_zero_tol)),
         check_common.out);
    return 0;
  }
  if (perturb_cmd->parsed()) {
    const genmean::SymmetricDensity density =
        genmean::load_density(perturb_density);
    const genmean::SymmetricDensity rho = genmean::load_density(perturb_rho);
    emit(genmean::density_to_json(
             genmean::blend_with_product(density, rho, perturb_steps)),
         perturb_common.out);
    return 0;
  }
  if (bounds_cmd->parsed()) {
    return run_bounds(bounds_order, bounds_slots, bounds_density,
                      bounds_exponent, bounds_seed, bounds_instances,
                      bounds_common);
  }
  if (example_cmd->parsed()) {
    int grid = example_grid;
    int steps = example_steps;
    int blocks = example_m;
    if (example_name == "ex1") {
      if (grid == 0) grid = 64;
      if (steps == 0) steps = 63;
    } else if (example_name == "ex2") {
      if (blocks == 0) blocks = 5;
    } else if (example_name == "ex3") {
      if (blocks == 0) blocks = 1000;
    } else if (example_name == "ex4") {
      if (grid == 0) grid = 16;
    }
    return run_example(example_name, grid, steps, blocks, example_common);
  }
  if (verify_cmd->parsed()) {
    const genmean::GridFunction kernel = genmean::load_function(verify_kernel);
    std::optional<genmean::SymmetricDensity> density;
    if (!verify_density.empty()) {
      density = genmean::load_density(verify_density);
    }
    const genmean::BoundCheckReport report = genmean::verify_bounds(
        kernel, verify_slots, density ? &*density : nullptr,
        parse_exponent(verify_exponent), parse_anchors(verify_anchor_list),
        verify_common.budget);
    emit(genmean::bound_check_to_json(report), verify_common.out);
    return report.ok() ? 0 : 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const genmean::Error& e) {
    std::cerr << e.what() << '\n';
    return genmean::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "E_INTERNAL: " << e.what() << '\n';
    return 1;
  }
}
