#include <benchmark/benchmark.h>

#include <map>

#include "specthresh/specthresh.hpp"

using namespace specthresh;

namespace {

const Trajectory& chain(std::size_t n) {
  static std::map<std::size_t, Trajectory> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, simulate_ou(OuParams{2.0, 2.0}, n, StationaryStart{}, 5)).first;
  return it->second;
}

}  // namespace

static void BM_SimulateOu(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ou(OuParams{2.0, 2.0}, n, StationaryStart{}, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateOu)->Arg(1000)->Arg(100000);

static void BM_Accumulate(benchmark::State& state) {
  const Trajectory& t = chain(static_cast<std::size_t>(state.range(0)));
  const TrigonometricBasis basis(BasisSpec{1, static_cast<std::size_t>(state.range(1))});
  for (auto _ : state) benchmark::DoNotOptimize(accumulate(t, basis));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Accumulate)->Args({1000, 4})->Args({6000, 6})->Args({1000000, 8});

static void BM_EstimateFromTrajectory(benchmark::State& state) {
  const Trajectory& t = chain(6000);
  EstimatorConfig cfg;
  cfg.basis = BasisSpec{1, static_cast<std::size_t>(state.range(0))};
  cfg.alpha = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(t, cfg));
}
BENCHMARK(BM_EstimateFromTrajectory)->Arg(3)->Arg(6)->Arg(16);

static void BM_HardThreshold(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  const CoeffMatrix mat(Eigen::MatrixXd::Random(m, m), BasisSpec{1, static_cast<std::size_t>(m)});
  for (auto _ : state) benchmark::DoNotOptimize(hard_threshold(mat, 0.5));
}
BENCHMARK(BM_HardThreshold)->Arg(5)->Arg(16)->Arg(64);

static void BM_LossCell(benchmark::State& state) {
  ExperimentConfig cfg = table1_config();
  cfg.threads = 1;
  const CoeffMatrix truth = truth_coefficients(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(cfg, truth, 1000, 4, 0.2));
}
BENCHMARK(BM_LossCell)->Unit(benchmark::kMillisecond);
