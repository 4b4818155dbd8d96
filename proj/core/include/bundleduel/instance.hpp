#pragma once

#include <optional>
#include <vector>

#include "bundleduel/distribution.hpp"

namespace bundleduel {

// Seller price lattice, expressed in value-grid ticks so min(v_i, q_i) stays
// on the shared lattice: admissible prices are multiples of step_ticks up to
// ub_ticks[i] (which defaults to seller i's Myerson tick).
struct PriceGrid {
  Tick step_ticks = 1;
  std::vector<Tick> ub_ticks;
};

struct MarketInstance {
  ValueGrid grid;
  std::vector<DiscreteDistribution> items;
  PriceGrid prices;

  int item_count() const { return static_cast<int>(items.size()); }
};

// Validates shared grids and fills price-grid defaults.
MarketInstance make_instance(const ValueGrid& grid, std::vector<DiscreteDistribution> items,
                             std::optional<PriceGrid> prices = std::nullopt);

// Admissible price ticks {0, s, 2s, ...} <= ub for seller i, ascending.
std::vector<Tick> price_grid_points(const MarketInstance& inst, int i);

}  // namespace bundleduel
