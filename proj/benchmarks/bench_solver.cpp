#include <benchmark/benchmark.h>

#include "mvstream/baselines.hpp"
#include "mvstream/solver_dp.hpp"
#include "mvstream/solver_greedy.hpp"

using namespace mvstream;

namespace {

Catalog synthetic_catalog(int num_views, int num_rates) {
  ViewpointGrid grid(num_views, 0.5);
  std::map<int, std::vector<int>> per_view;
  std::vector<int> rates;
  for (int k = 1; k <= num_rates; ++k) rates.push_back(100 * k);
  for (int v = 1; v <= num_views; ++v) per_view[v] = rates;
  return Catalog(grid, per_view);
}

const VideoProfile kProfile{"bench", {0.98, 282.17, 469.13}, std::nullopt, 0.35, 0.35};

}  // namespace

static void SolveOptimalLadder(benchmark::State& state) {
  const int num_rates = static_cast<int>(state.range(0));
  const Catalog catalog = synthetic_catalog(10, num_rates);
  const NavigationWindow window{0, catalog.grid().max_index()};
  const double budget = 10 * 400.0;  // fixed: the ladder axis alone scales
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_optimal(catalog, kProfile, window, budget));
  }
  state.SetComplexityN(num_rates);
}
BENCHMARK(SolveOptimalLadder)->RangeMultiplier(2)->Range(2, 32)->Complexity();

static void SolveOptimalViews(benchmark::State& state) {
  const int num_views = static_cast<int>(state.range(0));
  const Catalog catalog = synthetic_catalog(num_views, 8);
  const NavigationWindow window{0, catalog.grid().max_index()};
  const double budget = num_views * 400.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_optimal(catalog, kProfile, window, budget));
  }
  state.SetComplexityN(num_views);
}
BENCHMARK(SolveOptimalViews)->RangeMultiplier(2)->Range(2, 16)->Complexity();

static void SolveGreedyLadder(benchmark::State& state) {
  const int num_rates = static_cast<int>(state.range(0));
  const Catalog catalog = synthetic_catalog(10, num_rates);
  const NavigationWindow window{0, catalog.grid().max_index()};
  const double budget = 10 * 400.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_greedy(catalog, kProfile, window, budget));
  }
  state.SetComplexityN(num_rates);
}
BENCHMARK(SolveGreedyLadder)->RangeMultiplier(2)->Range(2, 32)->Complexity();

static void LateralPairBaseline(benchmark::State& state) {
  const Catalog catalog = synthetic_catalog(10, static_cast<int>(state.range(0)));
  const NavigationWindow window{0, catalog.grid().max_index()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        two_views_rate_adaptation(catalog, kProfile, window, 2000.0));
  }
}
BENCHMARK(LateralPairBaseline)->RangeMultiplier(2)->Range(2, 32);

BENCHMARK_MAIN();
