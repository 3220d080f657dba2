#include "genmean/generators.hpp"

#include <string>

namespace genmean {

MeasureSpacePtr random_space(std::size_t n_atoms, Rng& rng) {
  std::vector<std::string> labels;
  std::vector<double> weights;
  labels.reserve(n_atoms);
  weights.reserve(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    labels.push_back("a" + std::to_string(i));
    weights.push_back(rng.uniform(0.5, 1.5));
  }
  return make_space(std::move(labels), std::move(weights));
}

GridFunction random_function(MeasureSpacePtr space, int arity, Rng& rng,
                             double lo, double hi) {
  const std::size_t count = grid_entry_count(space->size(), arity);
  std::vector<double> values(count);
  for (double& v : values) {
    v = rng.uniform(lo, hi);
  }
  return GridFunction(std::move(space), arity, std::move(values));
}

GridFunction random_symmetric_function(MeasureSpacePtr space, int arity,
                                       Rng& rng, double lo, double hi) {
  return symmetrize(random_function(std::move(space), arity, rng, lo, hi));
}

SymmetricDensity random_density(MeasureSpacePtr space, int arity, Rng& rng) {
  GridFunction raw =
      random_symmetric_function(std::move(space), arity, rng, 0.2, 1.2);
  SymmetricDensity unnormalized(std::move(raw), false);
  return unnormalized.normalized_copy();
}

AnchorSelection random_anchors(std::size_t n_atoms, int n_slots, Rng& rng) {
  AnchorSelection anchors;
  anchors.anchor_atoms.clear();
  anchors.secondary_point.clear();
  // Enough draws that deep recursions keep consuming fresh atoms.
  const std::size_t pool = 4 * static_cast<std::size_t>(n_slots) + 4;
  for (std::size_t i = 0; i < pool; ++i) {
    anchors.anchor_atoms.push_back(rng.index(n_atoms));
  }
  for (int i = 0; i < n_slots; ++i) {
    anchors.secondary_point.push_back(rng.index(n_atoms));
  }
  return anchors;
}

}  // namespace genmean
