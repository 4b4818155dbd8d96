#include "bundleduel/generators.hpp"

#include <utility>

#include "bundleduel/errors.hpp"
#include "bundleduel/instance.hpp"

namespace bundleduel {

namespace {

// Weights >= floor_prob that sum to 1 (floor_prob * n must stay below 1).
std::vector<double> random_simplex(Rng& rng, int n, double floor_prob) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& v : w) {
    v = 1e-6 + rng.uniform01();
    sum += v;
  }
  const double spread = 1.0 - floor_prob * n;
  for (auto& v : w) v = floor_prob + spread * (v / sum);
  return w;
}

}  // namespace

DiscreteDistribution random_distribution(Rng& rng, const ValueGrid& grid,
                                         const DistributionGenOptions& opts) {
  const Tick lo = opts.allow_zero_atom ? 0 : 1;
  const auto available = grid.max_tick - lo + 1;
  int n = static_cast<int>(rng.range(opts.min_atoms, opts.max_atoms));
  n = static_cast<int>(std::min<std::int64_t>(n, available));
  if (n < 1 || grid.max_tick < 1) {
    throw GridOverflow("grid too small for a non-trivial distribution");
  }
  std::vector<Tick> ticks;
  do {
    ticks = rng.distinct(lo, grid.max_tick, n);
  } while (ticks.back() == 0);  // mass above zero keeps the distribution non-trivial

  const std::vector<double> probs = random_simplex(rng, n, opts.min_prob);
  std::vector<Atom> atoms;
  atoms.reserve(ticks.size());
  for (std::size_t i = 0; i < ticks.size(); ++i) atoms.push_back(Atom{ticks[i], probs[i]});
  return make_distribution_ticks(grid, std::move(atoms));
}

MarketInstance random_instance(Rng& rng, int m, const ValueGrid& grid,
                               const DistributionGenOptions& opts) {
  std::vector<DiscreteDistribution> items;
  items.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) items.push_back(random_distribution(rng, grid, opts));
  return make_instance(grid, std::move(items));
}

Menu random_menu(Rng& rng, int m, Tick price_cap_ticks) {
  const int kinds = m <= kMaxExplicitItems ? 3 : 2;
  switch (rng.below(static_cast<std::uint64_t>(kinds))) {
    case 0:
      return random_menu_of_kind(rng, MenuKind::GrandBundle, m, price_cap_ticks);
    case 1:
      return random_menu_of_kind(rng, MenuKind::Partition, m, price_cap_ticks);
    default:
      return random_menu_of_kind(rng, MenuKind::Explicit, m, price_cap_ticks);
  }
}

Menu random_menu_of_kind(Rng& rng, MenuKind kind, int m, Tick price_cap_ticks) {
  const auto price = [&]() { return rng.range(0, price_cap_ticks); };
  switch (kind) {
    case MenuKind::GrandBundle:
      return Menu::grand_bundle(m, price());
    case MenuKind::Partition: {
      // Random ordered split; occasionally one item is left off the menu.
      std::vector<int> items(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) items[static_cast<std::size_t>(i)] = i;
      for (int i = m - 1; i > 0; --i) {
        std::swap(items[static_cast<std::size_t>(i)],
                  items[static_cast<std::size_t>(rng.range(0, i))]);
      }
      int used = m;
      if (m >= 2 && rng.coin(0.2)) used = m - 1;
      std::vector<MenuEntry> blocks;
      ItemMask mask = 0;
      for (int i = 0; i < used; ++i) {
        mask |= ItemMask{1} << items[static_cast<std::size_t>(i)];
        const bool last = i + 1 == used;
        if (last || rng.coin(0.5)) {
          blocks.push_back(MenuEntry{mask, price()});
          mask = 0;
        }
      }
      return Menu::partition(m, std::move(blocks));
    }
    case MenuKind::Explicit: {
      if (m > kMaxExplicitItems) {
        throw UnsupportedMenuAtScale("explicit menus support at most 12 items");
      }
      const auto all = static_cast<std::int64_t>((ItemMask{1} << m) - 1);
      const int max_entries = static_cast<int>(std::min<std::int64_t>(all, 6));
      const int n = static_cast<int>(rng.range(1, max_entries));
      std::vector<MenuEntry> entries;
      entries.reserve(static_cast<std::size_t>(n));
      for (const std::int64_t mask : rng.distinct(1, all, n)) {
        entries.push_back(MenuEntry{static_cast<ItemMask>(mask), price()});
      }
      return Menu::explicit_menu(m, std::move(entries));
    }
  }
  throw UnsupportedMenuAtScale("unknown menu kind");
}

namespace {

MixedStrategy random_strategy(Rng& rng, const std::vector<Tick>& points, int max_support) {
  const int cap = static_cast<int>(std::min<std::size_t>(points.size(),
                                                         static_cast<std::size_t>(max_support)));
  const int k = static_cast<int>(rng.range(1, cap));
  std::vector<Tick> ticks;
  ticks.reserve(static_cast<std::size_t>(k));
  for (const std::int64_t idx : rng.distinct(0, static_cast<std::int64_t>(points.size()) - 1, k)) {
    ticks.push_back(points[static_cast<std::size_t>(idx)]);
  }
  if (k == 1) return pure_strategy(ticks.front());
  return make_strategy(std::move(ticks), random_simplex(rng, k, 0.05));
}

}  // namespace

StrategyProfile random_profile(Rng& rng, const MarketInstance& inst, int max_support) {
  StrategyProfile profile;
  profile.reserve(inst.items.size());
  for (int i = 0; i < inst.item_count(); ++i) {
    profile.push_back(random_strategy(rng, price_grid_points(inst, i), max_support));
  }
  return profile;
}

StrategyProfile random_profile_above(Rng& rng, const MarketInstance& inst,
                                     const std::vector<Tick>& lo_ticks, int max_support) {
  StrategyProfile profile;
  profile.reserve(inst.items.size());
  for (int i = 0; i < inst.item_count(); ++i) {
    std::vector<Tick> points = price_grid_points(inst, i);
    const Tick lo = lo_ticks[static_cast<std::size_t>(i)];
    std::erase_if(points, [&](Tick t) { return t < lo; });
    if (points.empty()) points.push_back(lo);
    profile.push_back(random_strategy(rng, points, max_support));
  }
  return profile;
}

}  // namespace bundleduel
