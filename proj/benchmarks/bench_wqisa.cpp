#include <benchmark/benchmark.h>

#include <random>

#include "wqisa/estimator.hpp"
#include "wqisa/kd_tree.hpp"
#include "wqisa/mba.hpp"
#include "wqisa/pipeline.hpp"
#include "wqisa/synthetic.hpp"

using namespace wqisa;

static void BM_IndexBuild(benchmark::State& state) {
  const auto cloud = hemisphere_cloud(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(PlanarIndex(cloud).depth());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IndexBuild)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oNLogN);

static void BM_Knn(benchmark::State& state) {
  const auto cloud = hemisphere_cloud(static_cast<std::size_t>(state.range(0)), 2);
  const PlanarIndex idx(cloud);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::uint64_t visited = 0;
  for (auto _ : state) {
    QueryStats s;
    benchmark::DoNotOptimize(idx.knn(u(rng), u(rng), 10, &s));
    visited += s.visited_nodes;
  }
  state.counters["visited"] = benchmark::Counter(static_cast<double>(visited), benchmark::Counter::kAvgIterations);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Knn)->RangeMultiplier(2)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oLogN);

// Coefficient estimation with truncated IDW (K = 500), the timing experiment setup.
static void BM_EstimateTruncatedIdw(benchmark::State& state) {
  const auto cloud = hemisphere_cloud(static_cast<std::size_t>(state.range(0)), 4);
  const auto space = TensorSplineSpace::uniform(Box2{0, 1, 0, 1}, 2, 2, 16, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_all_coefficients(cloud, space, WeightSpec::truncated_idw(500)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EstimateTruncatedIdw)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oNLogN)
    ->Unit(benchmark::kMillisecond);

static void BM_EstimateKnn(benchmark::State& state) {
  const auto cloud = hemisphere_cloud(1 << 16, 5);
  const ControlPointEstimator est(cloud);
  const auto e = static_cast<std::size_t>(state.range(0));
  const auto space = TensorSplineSpace::uniform(Box2{0, 1, 0, 1}, 2, 2, e, e);
  for (auto _ : state) benchmark::DoNotOptimize(est.estimate_grid(space, WeightSpec::knn(8)));
}
BENCHMARK(BM_EstimateKnn)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);

static void BM_Fit(benchmark::State& state) {
  const auto cloud = perturb(hemisphere_cloud(static_cast<std::size_t>(state.range(0)), 6), Perturbation{0.01, 0, 1}, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fit(cloud, FitConfig{}).report.iterations.size());
}
BENCHMARK(BM_Fit)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);

static void BM_FitMba(benchmark::State& state) {
  const auto cloud = hemisphere_cloud(static_cast<std::size_t>(state.range(0)), 8);
  MbaOptions opt;
  opt.max_levels = 6;
  for (auto _ : state) benchmark::DoNotOptimize(fit_mba(cloud, {}, opt).history.size());
}
BENCHMARK(BM_FitMba)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
