#include <benchmark/benchmark.h>

#include "updrift/binomial.hpp"
#include "updrift/potential.hpp"

namespace {

using namespace updrift;

void BM_ExactGExpectation(benchmark::State& state) {
  auto k = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_binomial_g_expectation(k, 0.3));
}
BENCHMARK(BM_ExactGExpectation)->Arg(100)->Arg(1000)->Arg(10000);

void BM_BinomialTailAtMean(benchmark::State& state) {
  auto k = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(binomial_tail_at_mean(k, 0.3));
}
BENCHMARK(BM_BinomialTailAtMean)->Arg(200)->Arg(2000);

}  // namespace
