// Serial reference vs OpenMP for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include "imitanet/experiments.hpp"
#include "imitanet/netgen.hpp"
#include "imitanet/targeted_control.hpp"
#include "imitanet/verify.hpp"

namespace {

using namespace imitanet;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_EvaluateCandidates(benchmark::State& state) {
  const std::size_t n = 400;
  const Instance inst =
      generate_instance({n, radius_for_mean_degree(n, 8.0), 1.0, 0.5, false}, 7);
  const RewardVector rewards(n);
  const auto eligible = eligible_set(inst.game, inst.x0);
  for (auto _ : state) {
    auto evals = evaluate_candidates(inst.game, rewards, inst.x0, eligible,
                                     kDefaultEpsilon, exec_of(state));
    benchmark::DoNotOptimize(evals);
  }
  state.counters["candidates"] = static_cast<double>(eligible.size());
}
BENCHMARK(BM_EvaluateCandidates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SizeSweep(benchmark::State& state) {
  ExperimentConfig cfg = ExperimentConfig::defaults("size_sweep");
  cfg.n_values = {20, 40};
  cfg.instances = 8;
  for (auto _ : state) {
    auto result = run_experiment(cfg, exec_of(state));
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_SizeSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_UniqueSuite(benchmark::State& state) {
  SuiteConfig cfg;
  cfg.instances = 16;
  for (auto _ : state) {
    auto report = run_unique_suite(cfg, exec_of(state));
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_UniqueSuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
