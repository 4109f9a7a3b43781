#include <benchmark/benchmark.h>

#include "updrift/process.hpp"
#include "updrift/verify.hpp"

namespace {

using namespace updrift;

ProcessSpec clamped_spec(std::int64_t k, double delta, std::int64_t n) {
  ProcessSpec spec;
  spec.kind = ProcessKind::BinomialClamped;
  spec.k = k;
  spec.delta = delta;
  spec.target_n = n;
  spec.gamma0 = 0.5;
  spec.x0 = 1;
  return spec;
}

void BM_StepBinomialClamped(benchmark::State& state) {
  ProcessSpec spec = clamped_spec(state.range(0), 0.5, state.range(0) / 4);
  RngStream rng(7);
  std::int64_t x = spec.target_n / 2;
  for (auto _ : state) benchmark::DoNotOptimize(step(spec, x, rng));
}
BENCHMARK(BM_StepBinomialClamped)->Arg(400)->Arg(4000)->Arg(40000);

void BM_HittingTimeTrajectory(benchmark::State& state) {
  ProcessSpec spec = clamped_spec(2000, 0.2, 100);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    RngStream rng = RngStream::substream(11, trial++);
    benchmark::DoNotOptimize(hitting_time(spec, kDefaultStepCap, rng));
  }
}
BENCHMARK(BM_HittingTimeTrajectory);

void BM_ExactMarkovOracle(benchmark::State& state) {
  ProcessSpec spec = clamped_spec(state.range(0), 0.5, state.range(0) / 8);
  for (auto _ : state) benchmark::DoNotOptimize(exact_hitting_time_markov(spec));
}
BENCHMARK(BM_ExactMarkovOracle)->Arg(80)->Arg(400)->Arg(1600);

}  // namespace
