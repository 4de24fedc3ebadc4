#include <benchmark/benchmark.h>

#include "lgsim/lgsim.hpp"

namespace {

void BM_SampleStatistics(benchmark::State& state) {
  const auto stats = lgsim::two_time_distribution(lgsim::amplitude_damping(0.3),
                                                  lgsim::canonical_scenario());
  const auto shots = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(lgsim::sample_statistics(stats, shots, ++seed));
}
BENCHMARK(BM_SampleStatistics)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_ExperimentPointLab(benchmark::State& state) {
  const lgsim::NoiseModel noise;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lgsim::experiment_point(0.5, 0.45, true, 10000, 10, noise, 1));
  }
}
BENCHMARK(BM_ExperimentPointLab)->Unit(benchmark::kMillisecond);

}  // namespace
