#pragma once

#include <span>
#include <vector>

#include "bundleduel/menu.hpp"

namespace bundleduel {

// One realized purchase: T from the principal, U from the item sellers.
struct Outcome {
  ItemMask principal_set = 0;
  ItemMask seller_set = 0;
  Tick principal_price = 0;
  Money principal_revenue = 0.0;
  std::vector<Money> seller_revenues;
  Money buyer_utility = 0.0;
  bool lex_tiebreak_used = false;  // level-3 tie-break decided the choice
};

// Utility-maximizing purchase for realized values v and seller prices q
// (both in ticks). T maximizes sum_{i in T} min(v_i, q_i) - p(T) over the
// menu's candidate sets; ties resolve by (1) smaller p(T), (2) fewer items
// of T bought at a positive seller price, (3) lexicographically smaller set.
// U = {i not in T : v_i >= q_i} plus every i with q_i = 0.
Outcome buyer_choice(const Menu& menu, std::span<const Tick> q, std::span<const Tick> v,
                     const ValueGrid& grid);

// Grand-bundle sale rule: p < sum_i min(v_i, q_i), strictly (a tie is a
// no-sale; the buyer breaks ties against the principal).
bool grand_bundle_sale(Tick bundle_price, std::span<const Tick> q, std::span<const Tick> v);

// Oracle for the locality of the buyer's choice: if v and v2 differ only on
// S and the chosen sets agree on S, the sets must be identical. Returns
// whether that implication held for this input.
bool value_change_check(const Menu& menu, std::span<const Tick> q, std::span<const Tick> v,
                        std::span<const Tick> v2, ItemMask s, const ValueGrid& grid);

// Buyer set as a function of one seller's price: constant `below` up to
// theta, constant `above` past it (sets may coincide, in which case
// theta_tick = q_max). theta_tick is the largest swept tick still yielding
// `below`.
struct ThresholdResult {
  ItemMask below = 0;
  ItemMask above = 0;
  Tick theta_tick = 0;
  Money theta = 0.0;
};

// Sweeps q_i over {0, step_ticks, 2*step_ticks, ..., q_max}; throws
// NonThresholdBehavior if the buyer set switches more than once.
ThresholdResult threshold_structure(const Menu& menu, std::span<const Tick> q_other,
                                    std::span<const Tick> v, int i, Tick q_max,
                                    const ValueGrid& grid, Tick step_ticks = 1);

}  // namespace bundleduel
