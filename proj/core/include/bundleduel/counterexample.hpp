#pragma once

#include <cstdint>
#include <vector>

#include "bundleduel/equilibrium.hpp"

namespace bundleduel {

// Doubly-exponential pair family: pair i holds two i.i.d. binary items with
// high value H_i = K^(2 * 3^(i-1)) hit with probability x_i = K^(-3^(i-1)),
// so H_i * x_i^2 = 1 exactly. The partition menu prices pair i one grid step
// above H_i.
struct CounterexampleSpec {
  std::int64_t K = 3;
  int n = 2;
  std::vector<std::int64_t> H;       // pair high values
  std::vector<std::int64_t> D;       // D_i = K^(3^(i-1)); x_i = 1/D_i, H_i = D_i^2
  std::vector<double> x;
  Menu partition_menu = Menu::grand_bundle(1, 0);  // placeholder; always rebuilt
};

struct CounterexampleInstance {
  MarketInstance instance;
  CounterexampleSpec spec;
};

// K > 2, n >= 1; value grid step 1, max_value H_n. Throws GridOverflow when
// H_n overflows the tick range.
CounterexampleInstance build_counterexample(std::int64_t k, int n);

// Grand-bundle price sweep. Each row solves the induced game at one price
// (dominance clip, pure brute force when in budget, best-response iteration
// and fictitious play from the given seeds) and reports the revenue band of
// the certified equilibria found.
struct SweepRow {
  Money price = 0.0;
  Tick price_ticks = 0;
  Money min_revenue = 0.0;
  Money max_revenue = 0.0;
  int n_equilibria = 0;
  int n_unconverged = 0;
  bool bound_ok = false;          // revenue band within the price's band bound
  double lemma_bound = 0.0;       // 3 (x_{i+1} + 1/(p x_i^2)) for the band's pair i; 0 outside
  double min_copy_sale_prob = 0.0;  // measured over upper-pair sellers at found equilibria
  bool no_sale_possible = false;  // p >= max possible sum of values
};

struct SweepOptions {
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int max_iters = 400;
  Money tol = 1e-9;
  std::uint64_t pure_budget = kDefaultPureBudget;
};

std::vector<SweepRow> grand_bundle_sweep(const MarketInstance& inst,
                                         const CounterexampleSpec& spec,
                                         const std::vector<Tick>& price_ticks,
                                         const SweepOptions& opts = {});

// ceil-rounded log-spaced tick prices in (0, hi], deduplicated, ascending.
std::vector<Tick> log_spaced_ticks(Money lo, Money hi, int count, const ValueGrid& grid);

}  // namespace bundleduel
