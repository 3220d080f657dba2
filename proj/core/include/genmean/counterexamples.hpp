#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genmean/densities.hpp"
#include "genmean/measure_space.hpp"

namespace genmean {

// Step-indexed summary statistics of a demonstration run. per_step[i]
// holds labelled statistics for steps[i]; meta holds run-level values.
struct ConvergenceTrace {
  std::vector<std::int64_t> steps;
  std::vector<std::vector<std::pair<std::string, double>>> per_step;
  std::vector<std::pair<std::string, double>> meta;
};

// Dyadic typewriter demonstration on a midpoint grid of [0,1]: step k
// zeroes the kernel on the k-th dyadic interval and lifts it to 2k
// elsewhere, so per-atom values oscillate forever while pairwise means
// blow up off a diagonal band of vanishing mass.
//
// Per step: level, u_min, u_max, inside_mass (weight of atoms in the
// active interval), below_mean_frac (weight fraction of pairs whose
// pairwise mean stays under k), far_violations (pairs under k despite
// separation above 2^(1-level); always zero), far_threshold.
// Meta: per complete level, the fraction of atoms that hit 0
// (level<l>_zero_frac) and that hit the 2k peak (level<l>_peak_frac).
ConvergenceTrace typewriter_trace(int grid_n, int steps);

// Signed block kernel whose pairwise values drop to -|j| exactly on
// anti-diagonal block pairs: unbounded below, yet every 3-argument mean
// of order 2 is nonnegative. Blocks are indexed -M..M with unit weight.
struct BlockKernelInstance {
  MeasureSpacePtr space;
  GridFunction kernel;  // arity 2
};
BlockKernelInstance alternating_block_kernel(int blocks_m);

// Banded pair density on M unit blocks, heavy on |i-j| = 1, with an
// alternating-sign kernel: the kernel's weighted L1 sums diverge while
// the pairwise mean's stay bounded.
struct BandedBlockInstance {
  MeasureSpacePtr space;
  SymmetricDensity density;  // arity 2, unnormalized
  GridFunction kernel;       // arity 1
};
BandedBlockInstance banded_block_instance(int blocks_m,
                                          std::size_t budget = kDefaultBudget);

// Weighted L1 partial sums of the banded instance at each checkpoint
// truncation, computed by streaming rows without materializing the pair
// grid. Per step: M, kernel_sum (L1 norm of the kernel against the
// one-coordinate marginal), mean_sum (L1 norm of the pairwise mean
// against the density).
ConvergenceTrace banded_block_sums(std::span<const int> checkpoints);

// Distance density 3|x1 - x2| on a uniform midpoint grid of [0,1]: its
// one-coordinate marginal is everywhere positive, yet the vanishing
// diagonal forces every domination constant to zero.
SymmetricDensity diagonal_vanishing_density(int grid_n);

}  // namespace genmean
