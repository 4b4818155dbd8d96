#pragma once

#include "bundleduel/buyer.hpp"
#include "bundleduel/convolution.hpp"
#include "bundleduel/menu.hpp"

namespace bundleduel {

inline constexpr int kMaxEnumerationItems = 4;

// Expected revenue of item seller i under (menu, profile).
//
// GrandBundle/Partition menus use the factorized form: within seller i's
// block with price p,
//   u_i = E_{q_i ~ s_i}[ Rev_i(q_i) * Pr[ p - q_i >= sum_{j != i} min(v_j, q_j) ] ]
// (non-strict: at equality the buyer skips the bundle and i sells). Sellers
// in no block face no principal competition and earn Rev_i(q_i) outright.
//
// Explicit menus enumerate value and price profiles through buyer_choice
// (item_count <= 4; otherwise UnsupportedMenuAtScale).
Money seller_utility(const MarketInstance& inst, const Menu& menu, const StrategyProfile& profile,
                     int i);

// Expected payment to the principal. GrandBundle: p * Pr[sum_i V_i > p];
// Partition: the same per block, summed; Explicit: enumeration.
Money principal_revenue(const MarketInstance& inst, const Menu& menu,
                        const StrategyProfile& profile);

// Enumeration paths are exposed separately so the factorized path can be
// cross-checked against them (they must agree to 1e-12 wherever both run).
Money seller_utility_enumeration(const MarketInstance& inst, const Menu& menu,
                                 const StrategyProfile& profile, int i);
Money principal_revenue_enumeration(const MarketInstance& inst, const Menu& menu,
                                    const StrategyProfile& profile);
// Whether the level-3 lexicographic tie-break ever decided a buyer choice
// reachable under (menu, profile) supports.
bool enumeration_uses_lex_tiebreak(const MarketInstance& inst, const Menu& menu,
                                   const StrategyProfile& profile);

Money seller_utility_factorized(const MarketInstance& inst, const Menu& menu,
                                const StrategyProfile& profile, int i);
Money principal_revenue_factorized(const MarketInstance& inst, const Menu& menu,
                                   const StrategyProfile& profile);

// Block containing item i: the grand bundle, the partition block, or an
// empty mask when no block covers i (seller competes with nobody).
ItemMask factor_block_of(const Menu& menu, int i);
Tick factor_block_price(const Menu& menu, int i);

// Index-list block view, usable at any item count (masks cap at 25 items):
// GrandBundle is one block of all items, Partition one block per entry.
// Items in no block are absent. Explicit menus do not factor.
struct FactorBlock {
  std::vector<int> items;
  Tick price = kInfTicks;
};
std::vector<FactorBlock> menu_blocks(const Menu& menu);

}  // namespace bundleduel
