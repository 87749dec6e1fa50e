#include <benchmark/benchmark.h>

#include "specthresh/specthresh.hpp"

using namespace specthresh;

static void BM_TransitionDensity(benchmark::State& state) {
  const WrappedDensity dens{OuParams{2.0, 2.0}};
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ou_transition_density(dens, x, 2.0));
    x += 1e-6;
  }
}
BENCHMARK(BM_TransitionDensity);

static void BM_OuOracle(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const QuadratureGrid grid{static_cast<std::size_t>(state.range(1))};
  const auto kernel = static_cast<OuKernel>(state.range(2));
  for (auto _ : state)
    benchmark::DoNotOptimize(ou_oracle(OuParams{2.0, 2.0}, BasisSpec{1, m}, grid, kernel));
}
BENCHMARK(BM_OuOracle)
    ->Args({8, 256, 0})
    ->Args({16, 512, 0})
    ->Args({8, 512, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_TruthCoefficients(benchmark::State& state) {
  const ExperimentConfig cfg = table1_config();
  for (auto _ : state) benchmark::DoNotOptimize(truth_coefficients(cfg));
}
BENCHMARK(BM_TruthCoefficients)->Unit(benchmark::kMillisecond);
