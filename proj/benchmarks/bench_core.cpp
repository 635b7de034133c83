#include <benchmark/benchmark.h>

#include <vector>

#include "doseeffect/dose_effect.hpp"
#include "doseeffect/fitting.hpp"
#include "doseeffect/skew_normal.hpp"

using namespace doseeffect;

namespace {

const std::vector<double> kDoses{0, 0.75, 1.5, 3};
const std::vector<double> kMeans{33.3875, 44.1625, 51.5, 78.225};
const std::vector<SummaryRow> kRows{{0, 33.3875, 26.9715, -0.0276, 8},
                                    {0.75, 44.1625, 30.8113, -0.1381, 8},
                                    {1.5, 51.5, 44.6582, 1.2827, 8},
                                    {3, 78.225, 31.9657, 0.3504, 8}};

void BM_sn_sample(benchmark::State& state) {
  const SkewNormalParams p{48.35, 43.75, 1.654};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sn_sample(p, 42, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sn_sample)->Arg(1000)->Arg(1000000);

void BM_sn_cdf(benchmark::State& state) {
  const SkewNormalParams p{0.0, 1.0, 3.0};
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sn_cdf(p, x));
    x = x > 3.0 ? -2.0 : x + 0.01;
  }
}
BENCHMARK(BM_sn_cdf);

void BM_params_of_moments(benchmark::State& state) {
  const MomentTriple t{78.225, 31.9657, 0.3504};
  for (auto _ : state) benchmark::DoNotOptimize(params_of_moments(t));
}
BENCHMARK(BM_params_of_moments);

void BM_fit_logistic_none_known(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(kDoses, kMeans, NoneKnown{}));
}
BENCHMARK(BM_fit_logistic_none_known);

void BM_fit_model(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit_model(kRows));
}
BENCHMARK(BM_fit_model);

void BM_optimal_dose(benchmark::State& state) {
  const DoseEffectModel model = fit_model(kRows).model;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_dose(model, 0.0, 3.0, Scalarized{1, 1, 1}));
  }
}
BENCHMARK(BM_optimal_dose);

}  // namespace

BENCHMARK_MAIN();
