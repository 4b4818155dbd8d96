// Microbenchmarks for the two solver hot paths: truncated-value convolutions
// and best-response scans.

#include <benchmark/benchmark.h>

#include <vector>

#include "bundleduel/convolution.hpp"
#include "bundleduel/equilibrium.hpp"
#include "bundleduel/generators.hpp"

namespace bd = bundleduel;

namespace {

// m i.i.d. two-point items at a common pure price: the many-item regime the
// bundle-price formula targets.
bd::MarketInstance coin_instance(int m) {
  const bd::ValueGrid grid = bd::make_grid(0.01, 1.0);
  std::vector<bd::DiscreteDistribution> items;
  items.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) items.push_back(bd::binary_distribution(grid, 1.0, 0.5));
  return bd::make_instance(grid, std::move(items));
}

std::vector<bd::Pmf> pure_laws(const bd::MarketInstance& inst, bd::Tick q) {
  std::vector<bd::Pmf> laws;
  laws.reserve(inst.items.size());
  for (const auto& d : inst.items) laws.push_back(bd::min_value_law_pure(d, q));
  return laws;
}

void BM_FullConvolution(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const bd::MarketInstance inst = coin_instance(m);
  const std::vector<bd::Pmf> laws = pure_laws(inst, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bd::full_convolution(laws));
  }
}
BENCHMARK(BM_FullConvolution)->Arg(10)->Arg(50);

void BM_LeaveOneOutConvolutions(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const bd::MarketInstance inst = coin_instance(m);
  const std::vector<bd::Pmf> laws = pure_laws(inst, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bd::loo_convolutions(laws));
  }
}
BENCHMARK(BM_LeaveOneOutConvolutions)->Arg(10)->Arg(50);

void BM_BestResponseFactorized(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const bd::MarketInstance inst = coin_instance(m);
  // Bundle priced at half the expected truncated welfare: sales happen.
  const bd::Menu menu = bd::Menu::grand_bundle(m, 25 * m);
  bd::StrategyProfile profile;
  for (int i = 0; i < m; ++i) profile.push_back(bd::pure_strategy(100));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bd::best_response(inst, menu, profile, 0));
  }
}
BENCHMARK(BM_BestResponseFactorized)->Arg(10)->Arg(50);

void BM_BestResponseEnumerated(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const bd::ValueGrid grid = bd::make_grid(0.05, 1.0);
  bd::Rng rng(7);
  const bd::MarketInstance inst = bd::random_instance(rng, m, grid);
  const bd::Menu menu = bd::random_menu_of_kind(rng, bd::MenuKind::Explicit, m, grid.max_tick);
  const bd::StrategyProfile profile = bd::random_profile(rng, inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bd::best_response(inst, menu, profile, 0));
  }
}
BENCHMARK(BM_BestResponseEnumerated)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
