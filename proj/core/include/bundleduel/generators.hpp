#pragma once

#include "bundleduel/menu.hpp"
#include "bundleduel/rng.hpp"
#include "bundleduel/strategy.hpp"

namespace bundleduel {

// Deterministic random test-data generators (all randomness through Rng).

struct DistributionGenOptions {
  int min_atoms = 2;
  int max_atoms = 5;
  bool allow_zero_atom = true;
  double min_prob = 0.05;
};

DiscreteDistribution random_distribution(Rng& rng, const ValueGrid& grid,
                                         const DistributionGenOptions& opts = {});

MarketInstance random_instance(Rng& rng, int m, const ValueGrid& grid,
                               const DistributionGenOptions& opts = {});

// Random menu of any kind (Explicit only when m <= kMaxExplicitItems); all
// prices on the grid within [0, price_cap_ticks].
Menu random_menu(Rng& rng, int m, Tick price_cap_ticks);
Menu random_menu_of_kind(Rng& rng, MenuKind kind, int m, Tick price_cap_ticks);

// Mixed profile with supports of size 1..max_support on each seller's grid.
StrategyProfile random_profile(Rng& rng, const MarketInstance& inst, int max_support = 3);

// Support drawn from [lo_ticks[i], ub] instead of [0, ub].
StrategyProfile random_profile_above(Rng& rng, const MarketInstance& inst,
                                     const std::vector<Tick>& lo_ticks, int max_support = 3);

}  // namespace bundleduel
