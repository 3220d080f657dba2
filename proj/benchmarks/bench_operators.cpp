#include <benchmark/benchmark.h>

#include <vector>

#include "genmean/genmean.hpp"

namespace {

using namespace genmean;

void BM_GeneralizedMean(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const int n_slots = static_cast<int>(state.range(1));
  Rng rng(1);
  auto space = random_space(4, rng);
  GridFunction u = random_symmetric_function(space, order, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generalized_mean(u, n_slots));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(
                              grid_entry_count(space->size(), n_slots)));
}
BENCHMARK(BM_GeneralizedMean)->Args({2, 4})->Args({3, 5})->Args({2, 6});

void BM_RecoverKernel(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const int n_slots = static_cast<int>(state.range(1));
  Rng rng(2);
  auto space = random_space(4, rng);
  GridFunction mean =
      generalized_mean(random_symmetric_function(space, order, rng), n_slots);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recover_kernel(mean, order));
  }
}
BENCHMARK(BM_RecoverKernel)->Args({2, 4})->Args({3, 5})->Args({2, 6});

void BM_Symmetrize(benchmark::State& state) {
  const int arity = static_cast<int>(state.range(0));
  Rng rng(3);
  auto space = random_space(5, rng);
  GridFunction g = random_function(space, arity, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetrize(g));
  }
}
BENCHMARK(BM_Symmetrize)->Arg(3)->Arg(5);

void BM_WeightedIntegral(benchmark::State& state) {
  Rng rng(4);
  auto space = random_space(10, rng);
  GridFunction f = random_function(space, 3, rng);
  GridFunction q = random_function(space, 3, rng, 0.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(f, q));
  }
}
BENCHMARK(BM_WeightedIntegral);

void BM_DominationProbe(benchmark::State& state) {
  SymmetricDensity density =
      diagonal_vanishing_density(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_cond27(density));
  }
}
BENCHMARK(BM_DominationProbe)->Arg(16)->Arg(64);

void BM_BandedSums(benchmark::State& state) {
  const std::vector<int> checkpoints = {static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(banded_block_sums(checkpoints));
  }
}
BENCHMARK(BM_BandedSums)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
