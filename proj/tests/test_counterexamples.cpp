#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fixture_values.hpp"
#include "genmean/bounds.hpp"
#include "genmean/counterexamples.hpp"
#include "genmean/operators.hpp"

using namespace genmean;

namespace {

double stat(const std::vector<std::pair<std::string, double>>& row,
            const std::string& key) {
  for (const auto& [k, v] : row) {
    if (k == key) {
      return v;
    }
  }
  FAIL("missing stat: " << key);
  return 0.0;
}

bool has_stat(const std::vector<std::pair<std::string, double>>& row,
              const std::string& key) {
  return std::any_of(row.begin(), row.end(),
                     [&](const auto& kv) { return kv.first == key; });
}

}  // namespace

TEST_CASE("typewriter sweep covers every cell at every level") {
  ConvergenceTrace trace = typewriter_trace(8, 7);
  REQUIRE(trace.steps.size() == 7);

  // Step 1 wipes the whole interval: the kernel is identically zero.
  CHECK(stat(trace.per_step[0], "u_min") == 0.0);
  CHECK(stat(trace.per_step[0], "u_max") == 0.0);
  CHECK(stat(trace.per_step[0], "inside_mass") == 1.0);
  CHECK(stat(trace.per_step[0], "below_mean_frac") == 1.0);

  // Step 2 zeroes the left half and lifts the right half to 4.
  CHECK(stat(trace.per_step[1], "level") == 1.0);
  CHECK(stat(trace.per_step[1], "u_max") == 4.0);
  CHECK(stat(trace.per_step[1], "inside_mass") == 0.5);

  // Step 3 is the sibling half; pairs below the mean are both inside.
  CHECK(stat(trace.per_step[2], "inside_mass") == 0.5);
  CHECK(stat(trace.per_step[2], "below_mean_frac") == 0.25);

  // Every pair under the step index sits within twice the interval width.
  for (const auto& row : trace.per_step) {
    CHECK(stat(row, "far_violations") == 0.0);
  }

  // Complete levels touch every atom with a zero and (level >= 1) a peak.
  CHECK(stat(trace.meta, "level0_zero_frac") == 1.0);
  CHECK(stat(trace.meta, "level1_zero_frac") == 1.0);
  CHECK(stat(trace.meta, "level1_peak_frac") == 1.0);
  CHECK(stat(trace.meta, "level2_zero_frac") == 1.0);
  CHECK(stat(trace.meta, "level2_peak_frac") == 1.0);
}

TEST_CASE("typewriter final-step statistics match the frozen values") {
  ConvergenceTrace trace = typewriter_trace(64, 63);
  const auto& last = trace.per_step.back();
  CHECK(stat(last, "level") == 5.0);
  CHECK(stat(last, "below_mean_frac") == fixtures::kTypewriterBothInside_64_63);
  CHECK(stat(last, "below_mean_frac") < fixtures::kTypewriterFatDiagMass_64_63);
  CHECK(stat(last, "far_violations") == 0.0);
  CHECK(stat(last, "inside_mass") == 0.03125);

  // Sweep completeness at every level of the run.
  for (int level = 0; level <= 5; ++level) {
    CHECK(stat(trace.meta,
               "level" + std::to_string(level) + "_zero_frac") == 1.0);
    if (level >= 1) {
      CHECK(stat(trace.meta,
                 "level" + std::to_string(level) + "_peak_frac") == 1.0);
    }
  }
}

TEST_CASE("typewriter rejects bad grids") {
  CHECK_THROWS_AS(typewriter_trace(5, 10), Error);
  CHECK_THROWS_AS(typewriter_trace(2, 10), Error);
  CHECK_THROWS_AS(typewriter_trace(8, 2), Error);
  try {
    typewriter_trace(48, 10);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadGrid);
  }
}

TEST_CASE("alternating block kernel at M=1") {
  BlockKernelInstance inst = alternating_block_kernel(1);
  CHECK(inst.space->size() == 3);
  CHECK(inst.space->labels()[0] == "b-1");
  // Rows i = -1, 0, 1 against columns j = -1, 0, 1.
  CHECK(inst.kernel.values() ==
        std::vector<double>{2.0, 1.0, -1.0, 1.0, 0.0, 1.0, -1.0, 1.0, 2.0});
  CHECK(ess_bounds(inst.kernel) == std::pair{-1.0, 2.0});
}

TEST_CASE("anti-diagonal pairs carry the negative values") {
  BlockKernelInstance inst = alternating_block_kernel(5);
  const std::size_t side = 11;
  for (int i = -5; i <= 5; ++i) {
    const std::size_t a = static_cast<std::size_t>(i + 5);
    const std::size_t b = static_cast<std::size_t>(-i + 5);
    const std::vector<std::size_t> idx = {a, b};
    CHECK(inst.kernel.at(idx) == -std::abs(static_cast<double>(i)));
    // Off the anti-diagonal the kernel is |i| + |j| >= 0.
    const std::size_t c = (b + 1) % side;
    if (c != b) {
      const std::vector<std::size_t> off = {a, c};
      CHECK(inst.kernel.at(off) >= 0.0);
    }
  }
  CHECK(ess_bounds(inst.kernel) == std::pair{-5.0, 10.0});
}

TEST_CASE("unbounded-below kernel with a nonnegative three-slot mean") {
  // Brute force at M=2, then the larger sizes the demonstration quotes.
  for (int blocks : {2, 3, 5}) {
    BlockKernelInstance inst = alternating_block_kernel(blocks);
    GridFunction mean = generalized_mean(inst.kernel, 3);
    const auto [mean_min, mean_max] = ess_bounds(mean);
    CAPTURE(blocks);
    CHECK(ess_bounds(inst.kernel).first ==
          -static_cast<double>(blocks));
    CHECK(mean_min == 0.0);
    CHECK(mean_max > 0.0);
  }
  CHECK_THROWS_AS(alternating_block_kernel(0), Error);
}

TEST_CASE("banded block instance values") {
  BandedBlockInstance inst = banded_block_instance(4);
  CHECK_FALSE(inst.density.normalized());
  const std::vector<std::size_t> adjacent = {0, 1};  // blocks 1 and 2
  CHECK(inst.density.grid().at(adjacent) == 1.0 / 9.0);
  const std::vector<std::size_t> skip = {0, 2};  // blocks 1 and 3
  CHECK(inst.density.grid().at(skip) == 1.0 / 256.0);
  CHECK(inst.kernel.values() == std::vector<double>{-2.0, 4.0, -6.0, 8.0});
  CHECK_THROWS_AS(banded_block_instance(1), Error);
}

TEST_CASE("kernel sums diverge while mean sums stay put") {
  const std::vector<int> checkpoints = {100, 1000, 10000};
  ConvergenceTrace trace = banded_block_sums(checkpoints);
  REQUIRE(trace.per_step.size() == 3);

  const double su_100 = stat(trace.per_step[0], "kernel_sum");
  const double su_1000 = stat(trace.per_step[1], "kernel_sum");
  const double su_10000 = stat(trace.per_step[2], "kernel_sum");
  CHECK(su_100 == doctest::Approx(fixtures::kBlockSumU_100).epsilon(1e-12));
  CHECK(su_1000 == doctest::Approx(fixtures::kBlockSumU_1000).epsilon(1e-12));
  CHECK(su_10000 ==
        doctest::Approx(fixtures::kBlockSumU_10000).epsilon(1e-12));
  CHECK(su_100 < su_1000);
  CHECK(su_1000 < su_10000);

  const double sm_100 = stat(trace.per_step[0], "mean_sum");
  const double sm_1000 = stat(trace.per_step[1], "mean_sum");
  const double sm_10000 = stat(trace.per_step[2], "mean_sum");
  CHECK(sm_100 == doctest::Approx(fixtures::kBlockSumMean_100).epsilon(1e-12));
  CHECK(sm_1000 ==
        doctest::Approx(fixtures::kBlockSumMean_1000).epsilon(1e-12));
  CHECK(sm_10000 ==
        doctest::Approx(fixtures::kBlockSumMean_10000).epsilon(1e-12));

  // The mean-sum increments stay under the analytic band tails.
  CHECK(sm_1000 - sm_100 <= fixtures::kBlockMeanTailBound_100);
  CHECK(sm_10000 - sm_1000 <= fixtures::kBlockMeanTailBound_1000);

  CHECK_THROWS_AS(banded_block_sums(std::vector<int>{}), Error);
  CHECK_THROWS_AS(banded_block_sums(std::vector<int>{1}), Error);
}

TEST_CASE("materialized banded sums agree with the streaming pass") {
  BandedBlockInstance inst = banded_block_instance(100);
  const std::vector<int> only = {100};
  ConvergenceTrace trace = banded_block_sums(only);

  SymmetricDensity marg = reduce(inst.density, 1);
  std::vector<double> abs_u(inst.kernel.size());
  for (std::size_t i = 0; i < abs_u.size(); ++i) {
    abs_u[i] = std::abs(inst.kernel[i]);
  }
  const double su =
      integrate(GridFunction(inst.space, 1, abs_u), marg.grid());
  CHECK(su ==
        doctest::Approx(stat(trace.per_step[0], "kernel_sum")).epsilon(1e-12));

  const double signed_integral = integrate(inst.kernel, marg.grid());
  CHECK(signed_integral ==
        doctest::Approx(fixtures::kBlockSignedIntegral_100).epsilon(1e-9));

  GridFunction mean = generalized_mean(inst.kernel, 2);
  CHECK(lr_norm(mean, inst.density, 1.0) ==
        doctest::Approx(fixtures::kBlockSumMean_100).epsilon(1e-12));
}

TEST_CASE("distance density defeats domination at every resolution") {
  for (int grid : {2, 4, 16, 128}) {
    SymmetricDensity density = diagonal_vanishing_density(grid);
    Cond27Report report = check_cond27(density);
    CAPTURE(grid);
    CHECK_FALSE(report.holds);
    CHECK(std::all_of(report.gamma.begin(), report.gamma.end(),
                      [](double g) { return g == 0.0; }));
    // Yet the one-coordinate marginal is strictly positive everywhere.
    const auto [lo, hi] = ess_bounds(reduce(density, 1).grid());
    CHECK(lo > 0.0);
    CHECK(hi <= 1.5);
  }
  CHECK_THROWS_AS(diagonal_vanishing_density(1), Error);
}

TEST_CASE("distance density marginal matches the closed form") {
  const int grid = 128;
  SymmetricDensity density = diagonal_vanishing_density(grid);
  GridFunction marg = reduce(density, 1).grid();
  double dev = 0.0;
  for (int t = 0; t < grid; ++t) {
    const double x = (2.0 * t + 1.0) / (2.0 * grid);
    const double closed = 3.0 * (x * x - x + 0.5);
    dev = std::max(dev, std::abs(marg[static_cast<std::size_t>(t)] - closed));
  }
  // All arithmetic here is dyadic-exact, so the gap is reproducible
  // bit for bit.
  CHECK(dev == fixtures::kDiagMarginalDev_128);
}
