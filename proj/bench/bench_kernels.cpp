#include <benchmark/benchmark.h>

#include "uwhunt/parallel.hpp"

namespace {

std::vector<std::vector<double>> random_series(int m, int length) {
  uwh::Rng rng(42);
  std::vector<std::vector<double>> s(static_cast<std::size_t>(m));
  for (auto& v : s)
    for (int k = 0; k < length; ++k) v.push_back(rng.uniform());
  return s;
}

void BM_KendallWindowsSerial(benchmark::State& state) {
  const auto s = random_series(3, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(uwh::windowed_consistency_serial(s, 100, 1, false));
}

void BM_KendallWindowsParallel(benchmark::State& state) {
  const auto s = random_series(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(uwh::windowed_consistency(s, 100, 1, false));
}

uwh::ScenarioConfig eval_config() {
  uwh::ScenarioConfig c;
  c.termination.horizon = 200;
  return c;
}

uwh::Mlp policy(const uwh::ScenarioConfig& c) {
  uwh::Rng rng(7);
  return uwh::Mlp(uwh::kObservationDim, c.dqn.hidden_sizes, uwh::ActionSpec::from(c).count(), rng);
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto c = eval_config();
  const auto net = policy(c);
  for (auto _ : state)
    benchmark::DoNotOptimize(uwh::evaluate_policy_serial(c, net, static_cast<int>(state.range(0)), 1.0));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto c = eval_config();
  const auto net = policy(c);
  for (auto _ : state)
    benchmark::DoNotOptimize(uwh::evaluate_policy(c, net, static_cast<int>(state.range(0)), 1.0));
}

}  // namespace

BENCHMARK(BM_KendallWindowsSerial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KendallWindowsParallel)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
