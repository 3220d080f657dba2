#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "genmean/measure_space.hpp"

namespace genmean {

// Nonnegative grid function that is invariant under argument permutations,
// optionally flagged as integrating to 1. Symmetry is validated to 1e-12
// relative on construction; library constructions keep it exact.
class SymmetricDensity {
 public:
  SymmetricDensity(GridFunction grid, bool normalized);

  // rho ⊗ ... ⊗ rho with n_slots factors. Each orbit's product is computed
  // once on the sorted tuple, so the result is exactly symmetric.
  static SymmetricDensity product_power(const SymmetricDensity& rho,
                                        int n_slots,
                                        std::size_t budget = kDefaultBudget);

  // Constant density integrating to 1 on the arity-k product space.
  static SymmetricDensity uniform(MeasureSpacePtr space, int arity,
                                  std::size_t budget = kDefaultBudget);

  const GridFunction& grid() const noexcept { return grid_; }
  int arity() const noexcept { return grid_.arity(); }
  bool normalized() const noexcept { return normalized_; }

  // Same values scaled to unit mass.
  SymmetricDensity normalized_copy() const;

 private:
  struct Trusted {};
  SymmetricDensity(Trusted, GridFunction grid, bool normalized);

  GridFunction grid_;
  bool normalized_;

  friend SymmetricDensity reduce(const SymmetricDensity&, int);
  friend SymmetricDensity blend_with_product(const SymmetricDensity&,
                                             const SymmetricDensity&, int);
  friend SymmetricDensity clip_renormalize(const SymmetricDensity&,
                                           const SymmetricDensity&, int);
};

// Marginal density on the first `keep` coordinates, integrating the last
// ones out one at a time. Iterating one coordinate at a time makes the
// tower identity reduce(reduce(P,k),l) == reduce(P,l) hold bit for bit.
SymmetricDensity reduce(const SymmetricDensity& density, int keep);

// Marginal of raw density values onto an arbitrary set of kept slots,
// in the order given. Per-bucket terms accumulate in ascending order of
// the dropped coordinates, so equal-size keep sets agree bitwise on
// exactly symmetric input.
GridFunction marginal_over(const GridFunction& density_values,
                           std::span<const std::size_t> keep_slots);

// Outcome of the density-domination probe: gamma[a] is the largest
// constant with P(., a) >= gamma[a] * (marginal of P on the leading
// coordinates), per anchor atom a.
struct Cond27Report {
  std::vector<double> gamma;
  std::vector<std::size_t> b_atoms;  // atoms with gamma above the zero gate
  bool holds = false;
  double epsilon = 0.0;  // half the best gamma; 0 when none is positive
  double alpha = 0.0;    // tuple-level transfer constant; 0 when undefined
  double beta = 0.0;     // section-level transfer constant; 0 when undefined
};

Cond27Report check_cond27(const SymmetricDensity& density,
                          double zero_tol = 1e-12);

// (steps * P + rho^(⊗N)) / (steps + 1): a strictly positive symmetric
// blend that always passes check_cond27 and converges to P in L1 as
// steps grows.
SymmetricDensity blend_with_product(const SymmetricDensity& density,
                                    const SymmetricDensity& rho, int steps);

// min(P, bound_factor * rho^(⊗N)), renormalized to unit mass. When the min
// never bites and P is normalized, P is returned unchanged.
SymmetricDensity clip_renormalize(const SymmetricDensity& density,
                                  const SymmetricDensity& rho,
                                  int bound_factor);

// True when every value lies strictly inside (1/ell, ell).
bool within_band(const SymmetricDensity& density, int ell);

struct ExpectationPair {
  double mean_side = 0.0;    // integral of the generalized mean against P
  double kernel_side = 0.0;  // integral of the kernel against the marginal
};

// Both sides of the expectation identity for a kernel of arity m <= N.
ExpectationPair expectation_pair(const GridFunction& kernel,
                                 const SymmetricDensity& density,
                                 std::size_t budget = kDefaultBudget);

// Integral of |a - b| over the product measure.
double l1_distance(const SymmetricDensity& a, const SymmetricDensity& b);

}  // namespace genmean
