#pragma once

#include <cstddef>
#include <vector>

#include "genmean/measure_space.hpp"

namespace genmean {

// Evaluation points used by the kernel-recovery recursion. On exact range
// elements every choice gives the same kernel, so defaults are all-zeros;
// alternatives exist to let tests demonstrate that independence.
//
// anchor_atoms supplies the held-fixed atoms consumed by the recursion in
// call order (cycled when exhausted); secondary_point supplies, per slot,
// the components of the fixed point used by the order-1 formula (cycled).
struct AnchorSelection {
  std::vector<std::size_t> anchor_atoms = {0};
  std::vector<std::size_t> secondary_point = {0};
};

// Default relative round-trip tolerance for kernel recovery: the recursion
// for order m >= 2 compounds roundoff through its levels.
double default_recovery_tol(int order);

// Average of g over all permutations of its arguments. Orbits are evaluated
// once and the average is written to every arrangement, so the result is
// exactly permutation-invariant.
GridFunction symmetrize(const GridFunction& g,
                        std::size_t budget = kDefaultBudget);

// Forward operator: the order-m generalized mean with n_slots arguments,
// averaging the kernel over all strictly increasing slot tuples.
GridFunction generalized_mean(const GridFunction& kernel, int n_slots,
                              std::size_t budget = kDefaultBudget);

struct KernelRecovery {
  GridFunction kernel;
  // ||generalized_mean(kernel) - input||_inf / ||input||_inf
  double residual = 0.0;
};

// Inverse operator: reconstructs the unique kernel of a generalized mean.
// Always returns the reconstruction plus its round-trip residual; callers
// that need a hard guarantee use require_kernel.
KernelRecovery recover_kernel(const GridFunction& mean, int order,
                              const AnchorSelection& anchors = {},
                              std::size_t budget = kDefaultBudget);

// recover_kernel with a hard residual gate; tol <= 0 selects the default
// for the order. Throws Errc::NotAGeneralizedMean above the gate.
GridFunction require_kernel(const GridFunction& mean, int order,
                            double tol = 0.0,
                            const AnchorSelection& anchors = {},
                            std::size_t budget = kDefaultBudget);

struct MeanMembership {
  bool is_mean = false;
  double residual = 0.0;
};

// Range-membership test: recovers a candidate kernel and reports whether
// the round trip lands within tol.
MeanMembership is_generalized_mean(const GridFunction& mean, int order,
                                   double tol,
                                   std::size_t budget = kDefaultBudget);

}  // namespace genmean
