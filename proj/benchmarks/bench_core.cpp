#include <benchmark/benchmark.h>

#include "metric_energy/metric_energy.hpp"

namespace me = metric_energy;

namespace {

void BM_SymEig(benchmark::State& state) {
  const auto space = me::random_metric(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(me::sym_eig(space.dist()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SymEig)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

void BM_Classify(benchmark::State& state) {
  const auto space = me::sphere_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(me::classify_negative_type(space));
}
BENCHMARK(BM_Classify)->RangeMultiplier(2)->Range(8, 256);

void BM_ComputeM(benchmark::State& state) {
  const auto space = me::interval_grid(0.0, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(me::compute_M(space));
}
BENCHMARK(BM_ComputeM)->RangeMultiplier(2)->Range(8, 256);

void BM_ComputeMPlus(benchmark::State& state) {
  const auto space = me::sphere_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(me::compute_M_plus(space));
}
BENCHMARK(BM_ComputeMPlus)->RangeMultiplier(4)->Range(8, 512);

void BM_Energy(benchmark::State& state) {
  const auto space = me::random_metric(static_cast<int>(state.range(0)), 2);
  me::Sampler sampler(3);
  const me::DiscreteSignedMeasure mu(space, sampler.mass_one(space.size()));
  for (auto _ : state) benchmark::DoNotOptimize(me::energy(mu));
}
BENCHMARK(BM_Energy)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace

BENCHMARK_MAIN();
