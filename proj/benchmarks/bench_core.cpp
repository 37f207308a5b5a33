#include <benchmark/benchmark.h>

#include "drselect/aipw.hpp"
#include "drselect/dgp.hpp"
#include "drselect/penalized.hpp"
#include "drselect/scad.hpp"

using namespace drselect;

namespace {

ScenarioSpec spec_for(int n) {
  ScenarioSpec spec;
  spec.scenario = 2;
  spec.setting = Setting::A;
  spec.n = n;
  spec.p = 50;
  spec.seed = 4;
  return spec;
}

void BM_ScadThreshold(benchmark::State& state) {
  const ScadParams p{0.4, 3.7};
  double z = -3.0;
  for (auto _ : state) {
    z += 0.001;
    if (z > 3.0) z = -3.0;
    benchmark::DoNotOptimize(scad_threshold(z, 1.1, p));
  }
}
BENCHMARK(BM_ScadThreshold);

void BM_Generate(benchmark::State& state) {
  const ScenarioSpec spec = spec_for(int(state.range(0)));
  for (auto _ : state) {
    auto [data, truth] = generate(spec);
    benchmark::DoNotOptimize(data.y.sum());
  }
}
BENCHMARK(BM_Generate)->Arg(2000)->Arg(5000);

void BM_PenalizedLinearCv(benchmark::State& state) {
  auto [raw, truth] = generate(spec_for(int(state.range(0))));
  auto [data, tf] = standardize(raw);
  auto [treated, control] = split_by_arm(data);
  LambdaGrid grid{.lambda_min = 0.1, .count = 32, .folds = 10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fit_penalized_linear(treated, grid, {}, 1, 0).lambda_used);
  }
}
BENCHMARK(BM_PenalizedLinearCv)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PenalizedLogisticCv(benchmark::State& state) {
  auto [raw, truth] = generate(spec_for(int(state.range(0))));
  auto [data, tf] = standardize(raw);
  LambdaGrid grid{.lambda_min = 0.02, .count = 32, .folds = 10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fit_penalized_logistic(data, grid, {}, 1, 0).lambda_used);
  }
}
BENCHMARK(BM_PenalizedLogisticCv)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RefitAndAipw(benchmark::State& state) {
  auto [raw, truth] = generate(spec_for(int(state.range(0))));
  auto [data, tf] = standardize(raw);
  const IndexSet set = IndexSet::of({3, 4});
  for (auto _ : state) {
    const RefitModels models = build_refit(data, set);
    const double tau = aipw_point(data, models);
    benchmark::DoNotOptimize(influence_values(data, models, tau).sum());
  }
}
BENCHMARK(BM_RefitAndAipw)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
