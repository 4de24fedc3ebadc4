#include <benchmark/benchmark.h>

#include "lgsim/lgsim.hpp"

namespace {

void BM_TwoTimeDistribution(benchmark::State& state) {
  const auto ch = lgsim::amplitude_damping(0.5);
  const auto& scen = lgsim::canonical_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(lgsim::two_time_distribution(ch, scen));
}
BENCHMARK(BM_TwoTimeDistribution);

void BM_FilteredChsh(benchmark::State& state) {
  const auto ch = lgsim::amplitude_damping(0.6);
  const auto [pre, post] = lgsim::sppo_pair(0.45);
  const auto& scen = lgsim::canonical_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(lgsim::filtered_chsh_value(ch, pre, post, scen));
}
BENCHMARK(BM_FilteredChsh);

void BM_ChoiChshMax(benchmark::State& state) {
  const auto choi = lgsim::choi_of_channel(lgsim::amplitude_damping(0.6));
  for (auto _ : state) benchmark::DoNotOptimize(lgsim::chsh_maximum(choi.state));
}
BENCHMARK(BM_ChoiChshMax);

}  // namespace
