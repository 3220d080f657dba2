#pragma once

#include <cstdint>
#include <random>

#include "genmean/densities.hpp"
#include "genmean/operators.hpp"

namespace genmean {

// Seeded source for the randomized suites; a fixed seed fixes every
// derived instance on a given toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  std::size_t index(std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_);
  }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Atoms "a0", "a1", ... with weights drawn from [0.5, 1.5).
MeasureSpacePtr random_space(std::size_t n_atoms, Rng& rng);

GridFunction random_function(MeasureSpacePtr space, int arity, Rng& rng,
                             double lo = -1.0, double hi = 1.0);

// Symmetrized random values; exactly permutation-invariant.
GridFunction random_symmetric_function(MeasureSpacePtr space, int arity,
                                       Rng& rng, double lo = -1.0,
                                       double hi = 1.0);

// Strictly positive, exactly symmetric, normalized to unit mass.
SymmetricDensity random_density(MeasureSpacePtr space, int arity, Rng& rng);

// Anchor pools drawn uniformly over the atoms.
AnchorSelection random_anchors(std::size_t n_atoms, int n_slots, Rng& rng);

}  // namespace genmean
