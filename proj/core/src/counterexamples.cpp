#include "genmean/counterexamples.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <string>

namespace genmean {

namespace {

MeasureSpacePtr midpoint_grid(int grid_n) {
  std::vector<std::string> labels;
  std::vector<double> weights;
  labels.reserve(static_cast<std::size_t>(grid_n));
  weights.assign(static_cast<std::size_t>(grid_n),
                 1.0 / static_cast<double>(grid_n));
  for (int t = 0; t < grid_n; ++t) {
    labels.push_back("x" + std::to_string(t));
  }
  return make_space(std::move(labels), std::move(weights));
}

double midpoint(int t, int grid_n) {
  return (2.0 * t + 1.0) / (2.0 * static_cast<double>(grid_n));
}

// Banded pair density on 1-based blocks: heavy next-to-diagonal band.
double banded_pair(int i, int j) {
  const double s = static_cast<double>(i + j);
  const double s2 = s * s;
  return (i - j == 1 || j - i == 1) ? 1.0 / s2 : 1.0 / (s2 * s2);
}

// Alternating-sign kernel value on 1-based block i.
double alternating_kernel(int i) {
  const double magnitude = 2.0 * static_cast<double>(i);
  return (i % 2 == 1) ? -magnitude : magnitude;
}

}  // namespace

ConvergenceTrace typewriter_trace(int grid_n, int steps) {
  if (grid_n < 4 || !std::has_single_bit(static_cast<unsigned>(grid_n))) {
    fail(Errc::BadGrid, "grid size must be a power of two, at least 4");
  }
  if (steps < 3) {
    fail(Errc::BadGrid, "trace needs at least 3 steps");
  }

  const std::size_t n = static_cast<std::size_t>(grid_n);
  const double atom_weight = 1.0 / static_cast<double>(grid_n);
  std::vector<double> xs(n);
  for (std::size_t t = 0; t < n; ++t) {
    xs[t] = midpoint(static_cast<int>(t), grid_n);
  }

  const int n_levels = std::bit_width(static_cast<unsigned>(steps));
  std::vector<std::vector<bool>> hit_zero(
      static_cast<std::size_t>(n_levels), std::vector<bool>(n, false));
  std::vector<std::vector<bool>> hit_peak(
      static_cast<std::size_t>(n_levels), std::vector<bool>(n, false));

  ConvergenceTrace trace;
  std::vector<char> inside(n);
  std::vector<double> u(n);
  for (int k = 1; k <= steps; ++k) {
    const int level = std::bit_width(static_cast<unsigned>(k)) - 1;
    const double width = 1.0 / static_cast<double>(1 << level);
    const double lo = static_cast<double>(k - (1 << level)) * width;
    const double hi = lo + width;

    CompensatedSum inside_mass;
    double u_min = 2.0 * k;
    double u_max = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      inside[t] = xs[t] >= lo && xs[t] < hi;
      u[t] = inside[t] ? 0.0 : 2.0 * static_cast<double>(k);
      if (inside[t]) {
        inside_mass.add(atom_weight);
        hit_zero[static_cast<std::size_t>(level)][t] = true;
      } else {
        hit_peak[static_cast<std::size_t>(level)][t] = true;
      }
      u_min = std::min(u_min, u[t]);
      u_max = std::max(u_max, u[t]);
    }

    const double far_threshold = 2.0 * width;
    CompensatedSum below_mass;
    double far_violations = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const double pair_mean = 0.5 * (u[a] + u[b]);
        if (pair_mean < static_cast<double>(k)) {
          below_mass.add(atom_weight * atom_weight);
          if (std::abs(xs[a] - xs[b]) > far_threshold) {
            far_violations += 1.0;
          }
        }
      }
    }

    trace.steps.push_back(k);
    trace.per_step.push_back({
        {"level", static_cast<double>(level)},
        {"u_min", u_min},
        {"u_max", u_max},
        {"inside_mass", inside_mass.value()},
        {"below_mean_frac", below_mass.value()},
        {"far_violations", far_violations},
        {"far_threshold", far_threshold},
    });
  }

  trace.meta.push_back({"grid_n", static_cast<double>(grid_n)});
  trace.meta.push_back({"steps", static_cast<double>(steps)});
  for (int level = 0; level < n_levels; ++level) {
    const long last_step_of_level = (1L << (level + 1)) - 1;
    if (last_step_of_level > steps) {
      continue;  // incomplete sweep: per-atom coverage is not promised
    }
    std::size_t zeros = 0;
    std::size_t peaks = 0;
    for (std::size_t t = 0; t < n; ++t) {
      zeros += hit_zero[static_cast<std::size_t>(level)][t] ? 1 : 0;
      peaks += hit_peak[static_cast<std::size_t>(level)][t] ? 1 : 0;
    }
    const std::string prefix = "level" + std::to_string(level);
    trace.meta.push_back({prefix + "_zero_frac",
                          static_cast<double>(zeros) / static_cast<double>(n)});
    if (level >= 1) {
      trace.meta.push_back(
          {prefix + "_peak_frac",
           static_cast<double>(peaks) / static_cast<double>(n)});
    }
  }
  return trace;
}

BlockKernelInstance alternating_block_kernel(int blocks_m) {
  if (blocks_m < 1) {
    fail(Errc::InvalidArgument, "block count parameter must be at least 1");
  }
  const int side = 2 * blocks_m + 1;
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(side));
  for (int i = -blocks_m; i <= blocks_m; ++i) {
    labels.push_back("b" + std::to_string(i));
  }
  MeasureSpacePtr space = make_space(
      std::move(labels), std::vector<double>(static_cast<std::size_t>(side),
                                             1.0));

  std::vector<double> values(static_cast<std::size_t>(side) *
                             static_cast<std::size_t>(side));
  for (int a = 0; a < side; ++a) {
    const int i = a - blocks_m;
    for (int b = 0; b < side; ++b) {
      const int j = b - blocks_m;
      const double value = (i == -j) ? -std::abs(static_cast<double>(j))
                                     : std::abs(static_cast<double>(i)) +
                                           std::abs(static_cast<double>(j));
      values[static_cast<std::size_t>(a) * static_cast<std::size_t>(side) +
             static_cast<std::size_t>(b)] = value;
    }
  }
  GridFunction kernel(space, 2, std::move(values));
  return {std::move(space), std::move(kernel)};
}

BandedBlockInstance banded_block_instance(int blocks_m, std::size_t budget) {
  if (blocks_m < 2) {
    fail(Errc::InvalidArgument, "banded instance needs at least 2 blocks");
  }
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(blocks_m));
  for (int i = 1; i <= blocks_m; ++i) {
    labels.push_back("i" + std::to_string(i));
  }
  MeasureSpacePtr space = make_space(
      std::move(labels),
      std::vector<double>(static_cast<std::size_t>(blocks_m), 1.0));
  require_budget(*space, 2, budget);

  const std::size_t n = static_cast<std::size_t>(blocks_m);
  std::vector<double> p(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      p[a * n + b] =
          banded_pair(static_cast<int>(a) + 1, static_cast<int>(b) + 1);
    }
  }
  std::vector<double> u(n);
  for (std::size_t a = 0; a < n; ++a) {
    u[a] = alternating_kernel(static_cast<int>(a) + 1);
  }

  SymmetricDensity density(GridFunction(space, 2, std::move(p)), false);
  GridFunction kernel(space, 1, std::move(u));
  return {std::move(space), std::move(density), std::move(kernel)};
}

ConvergenceTrace banded_block_sums(std::span<const int> checkpoints) {
  if (checkpoints.empty()) {
    fail(Errc::InvalidArgument, "need at least one checkpoint");
  }
  ConvergenceTrace trace;
  for (int truncation : checkpoints) {
    if (truncation < 2) {
      fail(Errc::InvalidArgument, "checkpoints must be at least 2");
    }
    // One row-major pass per truncation: the marginal of row i feeds the
    // kernel sum while the pairwise-mean sum accumulates directly.
    CompensatedSum kernel_sum;
    CompensatedSum mean_sum;
    for (int i = 1; i <= truncation; ++i) {
      const double u_i = alternating_kernel(i);
      CompensatedSum row_mass;
      for (int j = 1; j <= truncation; ++j) {
        const double p = banded_pair(i, j);
        row_mass.add(p);
        mean_sum.add(std::abs(0.5 * (u_i + alternating_kernel(j))) * p);
      }
      kernel_sum.add(std::abs(u_i) * row_mass.value());
    }
    trace.steps.push_back(truncation);
    trace.per_step.push_back({
        {"M", static_cast<double>(truncation)},
        {"kernel_sum", kernel_sum.value()},
        {"mean_sum", mean_sum.value()},
    });
  }
  trace.meta.push_back(
      {"checkpoints", static_cast<double>(checkpoints.size())});
  return trace;
}

SymmetricDensity diagonal_vanishing_density(int grid_n) {
  if (grid_n < 2) {
    fail(Errc::BadGrid, "grid size must be at least 2");
  }
  MeasureSpacePtr space = midpoint_grid(grid_n);
  const std::size_t n = static_cast<std::size_t>(grid_n);
  std::vector<double> values(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      values[a * n + b] = 3.0 * std::abs(midpoint(static_cast<int>(a), grid_n) -
                                         midpoint(static_cast<int>(b), grid_n));
    }
  }
  return SymmetricDensity(GridFunction(std::move(space), 2, std::move(values)),
                          false);
}

}  // namespace genmean
