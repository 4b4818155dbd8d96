#include "bundleduel/buyer.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

#include "bundleduel/errors.hpp"

namespace bundleduel {

namespace {

// Lexicographic order on the ascending item lists of two masks, with the
// prefix rule: {} < {1} < {1,2} < {2}. Equivalent bit form: let x be the
// lowest differing item; the mask holding x is smaller iff the other mask
// still has items above x (otherwise the other is a proper prefix).
bool mask_lex_less(ItemMask a, ItemMask b) {
  const ItemMask diff = a ^ b;
  if (diff == 0) return false;
  const ItemMask low = diff & (~diff + 1u);
  if (a & low) return (b >> 1) >= low;  // b has a bit strictly above low
  return (a >> 1) < low;                // a is a proper prefix of b
}

struct Scored {
  ItemMask set = 0;
  Tick price = 0;   // closure price p(T)
  Tick diff = 0;    // sum_{i in T} min(v_i, q_i) - p(T)
  int dual_buys = 0;  // |{i in T : v_i >= q_i, q_i > 0}|
};

// Tie-break chain: larger diff, then smaller price, then fewer dual buys,
// then lexicographically smaller set.
bool better(const Scored& a, const Scored& b) {
  if (a.diff != b.diff) return a.diff > b.diff;
  if (a.price != b.price) return a.price < b.price;
  if (a.dual_buys != b.dual_buys) return a.dual_buys < b.dual_buys;
  return mask_lex_less(a.set, b.set);
}

Scored score(ItemMask set, Tick price, std::span<const Tick> q, std::span<const Tick> v) {
  Scored s;
  s.set = set;
  s.price = price;
  Tick gain = 0;
  for (ItemMask rest = set; rest != 0; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    gain += std::min(v[i], q[i]);
    if (v[i] >= q[i] && q[i] > 0) ++s.dual_buys;
  }
  s.diff = gain - s.price;
  return s;
}

}  // namespace

Outcome buyer_choice(const Menu& menu, std::span<const Tick> q, std::span<const Tick> v,
                     const ValueGrid& grid) {
  const int m = menu.item_count();
  if (m > kMaxMaskItems) throw UnsupportedMenuAtScale("buyer oracle supports at most 25 items");
  if (static_cast<int>(q.size()) != m || static_cast<int>(v.size()) != m) {
    throw OffGridValue("price/value vector length must match the item count");
  }

  const auto candidates = menu.candidate_sets();
  Scored best;
  bool have = false;
  bool level3 = false;
  for (const MenuEntry& cand : candidates) {
    Scored s = score(cand.items, cand.price, q, v);
    if (s.price == kInfTicks) continue;  // not purchasable
    if (!have) {
      best = s;
      have = true;
      continue;
    }
    if (s.diff == best.diff && s.price == best.price && s.dual_buys == best.dual_buys) {
      level3 = true;
    }
    if (better(s, best)) best = s;
  }
  // candidate_sets always contains the purchasable empty set, so `have` holds.

  Outcome out;
  out.principal_set = best.set;
  out.principal_price = best.price;
  out.principal_revenue = grid.value(best.price);
  out.lex_tiebreak_used = level3;
  out.seller_revenues.assign(static_cast<std::size_t>(m), 0.0);
  Tick seller_paid = 0;
  Tick kept_value = 0;
  for (int i = 0; i < m; ++i) {
    const bool in_t = (best.set >> i) & 1u;
    const bool in_u = (!in_t && v[i] >= q[i]) || q[i] == 0;
    if (in_u) {
      out.seller_set |= ItemMask{1} << i;
      out.seller_revenues[static_cast<std::size_t>(i)] = grid.value(q[i]);
      seller_paid += q[i];
    }
    if (in_t || in_u) kept_value += v[i];
  }
  out.buyer_utility = grid.value(kept_value - best.price - seller_paid);
  return out;
}

bool grand_bundle_sale(Tick bundle_price, std::span<const Tick> q, std::span<const Tick> v) {
  if (bundle_price == kInfTicks) return false;
  Tick total = 0;
  for (std::size_t i = 0; i < q.size(); ++i) total += std::min(v[i], q[i]);
  return bundle_price < total;
}

bool value_change_check(const Menu& menu, std::span<const Tick> q, std::span<const Tick> v,
                        std::span<const Tick> v2, ItemMask s, const ValueGrid& grid) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != v2[i] && !((s >> i) & 1u)) {
      throw OffGridValue("value vectors differ outside the designated set");
    }
  }
  const ItemMask t1 = buyer_choice(menu, q, v, grid).principal_set;
  const ItemMask t2 = buyer_choice(menu, q, v2, grid).principal_set;
  return (t1 & s) != (t2 & s) || t1 == t2;
}

ThresholdResult threshold_structure(const Menu& menu, std::span<const Tick> q_other,
                                    std::span<const Tick> v, int i, Tick q_max,
                                    const ValueGrid& grid, Tick step_ticks) {
  if (step_ticks <= 0 || q_max < 0) throw OffGridValue("threshold sweep needs q_max >= 0, step > 0");
  std::vector<Tick> q(q_other.begin(), q_other.end());

  ThresholdResult res;
  bool switched = false;
  ItemMask prev = 0;
  for (Tick k = 0;; k += step_ticks) {
    if (k > q_max) break;
    q[static_cast<std::size_t>(i)] = k;
    const ItemMask t = buyer_choice(menu, q, v, grid).principal_set;
    if (k == 0) {
      res.below = t;
      res.theta_tick = k;
    } else if (t != prev) {
      if (switched) throw NonThresholdBehavior("buyer set switched twice along one price sweep");
      switched = true;
      res.above = t;
      res.theta_tick = k - step_ticks;
    }
    prev = t;
  }
  if (!switched) {
    res.above = res.below;
    res.theta_tick = q_max;
  }
  res.theta = grid.value(res.theta_tick);
  return res;
}

}  // namespace bundleduel
