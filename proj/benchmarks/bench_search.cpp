#include <benchmark/benchmark.h>

#include "lgsim/lgsim.hpp"

namespace {

void BM_ActivateSppo(benchmark::State& state) {
  const auto ch = lgsim::amplitude_damping(0.6);
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lgsim::activate(ch, lgsim::canonical_scenario(), lgsim::SearchFamily::sppo, res));
  }
}
BENCHMARK(BM_ActivateSppo)->Arg(11)->Arg(21)->Arg(101);

void BM_ActivateIndependent(benchmark::State& state) {
  const auto ch = lgsim::amplitude_damping(0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lgsim::activate(ch, lgsim::canonical_scenario(),
                                             lgsim::SearchFamily::sppo_independent, 21));
  }
}
BENCHMARK(BM_ActivateIndependent)->Unit(benchmark::kMillisecond);

void BM_HiddenNonlocality(benchmark::State& state) {
  const auto choi = lgsim::choi_of_channel(lgsim::amplitude_damping(0.9));
  for (auto _ : state) benchmark::DoNotOptimize(lgsim::hidden_nonlocality_search(choi.state, 11));
}
BENCHMARK(BM_HiddenNonlocality)->Unit(benchmark::kMillisecond);

}  // namespace
