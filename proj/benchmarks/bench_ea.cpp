#include <benchmark/benchmark.h>

#include "updrift/ea.hpp"

namespace {

using namespace updrift;

EaConfig tournament_config(std::int64_t n, std::int64_t lambda) {
  EaConfig config;
  config.n = n;
  config.lambda = lambda;
  config.selection = SelectionKind::Tournament2;
  config.fitness = FitnessKind::OneMax;
  config.pmut = 1.0 / static_cast<double>(2 * n * n);
  return config;
}

void BM_EaGeneration(benchmark::State& state) {
  EaConfig config = tournament_config(50, state.range(0));
  RngStream rng(3);
  Population pop;
  for (std::int64_t i = 0; i < config.lambda; ++i)
    pop.push_back(Bitstring::random(50, rng));
  for (auto _ : state) {
    pop = ea_generation(config, pop, rng);
    benchmark::DoNotOptimize(pop.data());
  }
  state.SetItemsProcessed(state.iterations() * config.lambda);
}
BENCHMARK(BM_EaGeneration)->Arg(256)->Arg(4096)->Arg(32768);

void BM_MutateStandard(benchmark::State& state) {
  RngStream rng(5);
  Bitstring x = Bitstring::random(1000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mutate_standard(x, 0.01, rng));
}
BENCHMARK(BM_MutateStandard);

}  // namespace
