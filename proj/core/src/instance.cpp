#include "bundleduel/instance.hpp"

#include "bundleduel/errors.hpp"

namespace bundleduel {

MarketInstance make_instance(const ValueGrid& grid, std::vector<DiscreteDistribution> items,
                             std::optional<PriceGrid> prices) {
  if (items.empty()) throw OffGridValue("market needs at least one item");
  for (const auto& d : items) {
    if (d.grid().step != grid.step || d.grid().max_tick != grid.max_tick) {
      throw OffGridValue("all item distributions must share the market value grid");
    }
  }
  MarketInstance inst;
  inst.grid = grid;
  inst.items = std::move(items);
  if (prices) {
    inst.prices = std::move(*prices);
    if (inst.prices.step_ticks <= 0) throw OffGridValue("price grid step must be positive");
  }
  if (inst.prices.ub_ticks.empty()) {
    for (const auto& d : inst.items) inst.prices.ub_ticks.push_back(myerson_tick(d));
  }
  if (inst.prices.ub_ticks.size() != inst.items.size()) {
    throw OffGridValue("price grid needs one upper bound per item seller");
  }
  for (const Tick ub : inst.prices.ub_ticks) {
    if (ub < 0) throw OffGridValue("price upper bounds must be nonnegative");
  }
  return inst;
}

std::vector<Tick> price_grid_points(const MarketInstance& inst, int i) {
  std::vector<Tick> pts;
  const Tick ub = inst.prices.ub_ticks[static_cast<std::size_t>(i)];
  for (Tick t = 0; t <= ub; t += inst.prices.step_ticks) pts.push_back(t);
  return pts;
}

}  // namespace bundleduel
