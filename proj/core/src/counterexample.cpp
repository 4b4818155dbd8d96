#include "bundleduel/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bundleduel/convolution.hpp"
#include "bundleduel/errors.hpp"

namespace bundleduel {

namespace {

// Largest value the shared grid can snap reliably.
constexpr double kMaxGridMoney = 9.0e15;

std::int64_t checked_square(std::int64_t d) {
  if (d > 3'037'000'499LL) throw GridOverflow("pair high value overflows the tick range");
  return d * d;
}

std::int64_t checked_cube(std::int64_t d) {
  if (d > 2'097'151LL) throw GridOverflow("pair ratio overflows the tick range");
  return d * d * d;
}

// Transaction probability of seller j under the profile: the seller is paid
// q when its own value covers q and the block mates leave enough headroom.
double seller_sale_prob(const MarketInstance& inst, Tick bundle_price,
                        const StrategyProfile& profile, int j) {
  std::vector<Pmf> other_laws;
  other_laws.reserve(profile.size() - 1);
  for (int i = 0; i < static_cast<int>(profile.size()); ++i) {
    if (i == j) continue;
    other_laws.push_back(min_value_law(inst.items[static_cast<std::size_t>(i)],
                                       profile[static_cast<std::size_t>(i)]));
  }
  const Cdf rivals = make_cdf(full_convolution(other_laws));
  const auto& s = profile[static_cast<std::size_t>(j)];
  const auto& d = inst.items[static_cast<std::size_t>(j)];
  double prob = 0.0;
  for (std::size_t k = 0; k < s.ticks.size(); ++k) {
    const Tick headroom = bundle_price - s.ticks[k];
    if (headroom < 0) continue;
    prob += s.probs[k] * prob_at_least(d, inst.grid.value(s.ticks[k])) * rivals.at_most(headroom);
  }
  return prob;
}

}  // namespace

CounterexampleInstance build_counterexample(std::int64_t k, int n) {
  if (k <= 2) throw OffGridValue("pair family needs K > 2");
  if (n < 1) throw OffGridValue("pair family needs at least one pair");

  CounterexampleSpec spec;
  spec.K = k;
  spec.n = n;
  std::int64_t d = k;
  for (int i = 0; i < n; ++i) {
    if (i > 0) d = checked_cube(d);
    spec.D.push_back(d);
    spec.H.push_back(checked_square(d));
    spec.x.push_back(1.0 / static_cast<double>(d));
  }
  const std::int64_t top = spec.H.back();
  if (static_cast<double>(top) > kMaxGridMoney) {
    throw GridOverflow("pair high value exceeds the grid range");
  }

  const ValueGrid grid = make_grid(1.0, static_cast<Money>(top));
  std::vector<DiscreteDistribution> items;
  items.reserve(static_cast<std::size_t>(2 * n));
  std::vector<MenuEntry> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto hi = static_cast<Money>(spec.H[static_cast<std::size_t>(i)]);
    items.push_back(binary_distribution(grid, hi, spec.x[static_cast<std::size_t>(i)]));
    items.push_back(binary_distribution(grid, hi, spec.x[static_cast<std::size_t>(i)]));
    const auto mask = static_cast<ItemMask>(ItemMask{0b11} << (2 * i));
    blocks.push_back(MenuEntry{mask, spec.H[static_cast<std::size_t>(i)] + 1});
  }
  spec.partition_menu = Menu::partition(2 * n, std::move(blocks));

  CounterexampleInstance out;
  out.instance = make_instance(grid, std::move(items));
  out.spec = std::move(spec);
  return out;
}

std::vector<SweepRow> grand_bundle_sweep(const MarketInstance& inst,
                                         const CounterexampleSpec& spec,
                                         const std::vector<Tick>& price_ticks,
                                         const SweepOptions& opts) {
  const int m = inst.item_count();
  Tick max_sum = 0;
  for (const auto& d : inst.items) max_sum += d.max_support_tick();

  const auto n = static_cast<std::size_t>(spec.n);
  const double low_edge = 3.0 * static_cast<double>(spec.H.front());
  const double top_edge = 3.0 * static_cast<double>(spec.H.back());
  const double kk = static_cast<double>(spec.K) * static_cast<double>(spec.K);
  const Money band_tol = 1e-9;

  std::vector<SweepRow> rows;
  rows.reserve(price_ticks.size());
  for (const Tick p : price_ticks) {
    SweepRow row;
    row.price_ticks = p;
    row.price = inst.grid.value(p);
    row.no_sale_possible = p >= max_sum;

    const Menu menu = Menu::grand_bundle(m, p);
    SolverOptions solver;
    solver.seeds = opts.seeds;
    solver.dynamics.max_iters = opts.max_iters;
    solver.dynamics.tol = opts.tol;
    solver.pure_budget = opts.pure_budget;
    const SolveReport report = solve_all(inst, menu, solver);

    row.n_equilibria = static_cast<int>(report.equilibria.size());
    row.n_unconverged = static_cast<int>(report.unconverged.size());
    if (!report.equilibria.empty()) {
      row.min_revenue = std::numeric_limits<Money>::infinity();
      for (const auto& cert : report.equilibria) {
        row.min_revenue = std::min(row.min_revenue, cert.principal_revenue);
        row.max_revenue = std::max(row.max_revenue, cert.principal_revenue);
      }
    }

    // Band index: the last pair whose 3 H_i threshold the price has crossed.
    std::size_t band = 0;  // 1-based; 0 = below every threshold
    for (std::size_t i = 0; i < n; ++i) {
      if (row.price >= 3.0 * static_cast<double>(spec.H[i])) band = i + 1;
    }
    if (band > 0) {
      const double next_x = band < n ? spec.x[band] : 0.0;
      const double xi = spec.x[band - 1];
      row.lemma_bound = 3.0 * (next_x + 1.0 / (row.price * xi * xi));
    }

    if (report.equilibria.empty()) {
      row.bound_ok = true;  // vacuous: nothing certified at this price
    } else if (row.no_sale_possible || row.price >= top_edge) {
      row.bound_ok = std::abs(row.max_revenue) <= 1e-12;
    } else if (row.price < low_edge) {
      row.bound_ok = row.max_revenue <= std::min(row.price, 3.0 * kk) + band_tol;
    } else {
      row.bound_ok = row.max_revenue <= 4.0 * kk + band_tol;
    }

    // Transaction odds of the top pair's sellers at the certified profiles.
    if (!report.equilibria.empty() && m >= 2) {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& cert : report.equilibria) {
        for (int j = m - 2; j < m; ++j) {
          lo = std::min(lo, seller_sale_prob(inst, p, cert.profile, j));
        }
      }
      row.min_copy_sale_prob = lo;
    }

    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Tick> log_spaced_ticks(Money lo, Money hi, int count, const ValueGrid& grid) {
  if (!(lo > 0.0) || !(hi >= lo)) throw OffGridValue("log spacing needs 0 < lo <= hi");
  if (count < 1) throw OffGridValue("log spacing needs at least one point");
  std::vector<Tick> ticks;
  ticks.reserve(static_cast<std::size_t>(count));
  const double ratio = hi / lo;
  for (int j = 0; j < count; ++j) {
    const double frac = count == 1 ? 1.0 : static_cast<double>(j) / (count - 1);
    const double money = lo * std::pow(ratio, frac);
    const auto tick = static_cast<Tick>(std::ceil(money / grid.step - 1e-9));
    ticks.push_back(std::max<Tick>(tick, 1));
  }
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  return ticks;
}

}  // namespace bundleduel
