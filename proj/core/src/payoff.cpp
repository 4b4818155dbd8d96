#include "bundleduel/payoff.hpp"

#include <algorithm>
#include <bit>

#include "bundleduel/errors.hpp"
#include "bundleduel/instance.hpp"
#include "bundleduel/strategy.hpp"

namespace bundleduel {

namespace {

void check_profile(const MarketInstance& inst, const StrategyProfile& profile) {
  if (static_cast<int>(profile.size()) != inst.item_count()) {
    throw OffGridValue("profile must contain one strategy per item seller");
  }
}

struct Expected {
  std::vector<Money> sellers;
  Money principal = 0.0;
  bool lex_used = false;
};

// Exact expectation by enumerating the product of value supports and
// strategy supports through the buyer oracle.
Expected enumerate_expected(const MarketInstance& inst, const Menu& menu,
                            const StrategyProfile& profile) {
  const int m = inst.item_count();
  if (m > kMaxEnumerationItems) {
    throw UnsupportedMenuAtScale("payoff enumeration supports at most 4 items");
  }
  check_profile(inst, profile);

  Expected out;
  out.sellers.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<std::size_t> vi(static_cast<std::size_t>(m), 0);
  std::vector<std::size_t> qi(static_cast<std::size_t>(m), 0);
  std::vector<Tick> v(static_cast<std::size_t>(m), 0);
  std::vector<Tick> q(static_cast<std::size_t>(m), 0);

  const auto advance = [m](std::vector<std::size_t>& idx, const auto& limit) {
    for (int i = 0; i < m; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < limit(i)) return true;
      idx[static_cast<std::size_t>(i)] = 0;
    }
    return false;
  };
  const auto atom_count = [&](int i) { return inst.items[static_cast<std::size_t>(i)].atoms().size(); };
  const auto supp_count = [&](int i) { return profile[static_cast<std::size_t>(i)].ticks.size(); };

  do {
    double pv = 1.0;
    for (int i = 0; i < m; ++i) {
      const auto& a = inst.items[static_cast<std::size_t>(i)].atoms()[vi[static_cast<std::size_t>(i)]];
      v[static_cast<std::size_t>(i)] = a.tick;
      pv *= a.prob;
    }
    std::fill(qi.begin(), qi.end(), 0);
    do {
      double pq = pv;
      for (int i = 0; i < m; ++i) {
        const auto& s = profile[static_cast<std::size_t>(i)];
        q[static_cast<std::size_t>(i)] = s.ticks[qi[static_cast<std::size_t>(i)]];
        pq *= s.probs[qi[static_cast<std::size_t>(i)]];
      }
      const Outcome o = buyer_choice(menu, q, v, inst.grid);
      out.principal += pq * o.principal_revenue;
      for (int i = 0; i < m; ++i) {
        out.sellers[static_cast<std::size_t>(i)] += pq * o.seller_revenues[static_cast<std::size_t>(i)];
      }
      out.lex_used = out.lex_used || o.lex_tiebreak_used;
    } while (advance(qi, supp_count));
  } while (advance(vi, atom_count));
  return out;
}

double expected_seller_revenue(const DiscreteDistribution& d, const MixedStrategy& s,
                               const ValueGrid& grid) {
  double u = 0.0;
  for (std::size_t k = 0; k < s.ticks.size(); ++k) {
    u += s.probs[k] * revenue_at(d, grid.value(s.ticks[k]));
  }
  return u;
}

}  // namespace

std::vector<FactorBlock> menu_blocks(const Menu& menu) {
  std::vector<FactorBlock> blocks;
  switch (menu.kind()) {
    case MenuKind::GrandBundle: {
      FactorBlock b;
      b.price = menu.grand_price_ticks();
      for (int i = 0; i < menu.item_count(); ++i) b.items.push_back(i);
      blocks.push_back(std::move(b));
      break;
    }
    case MenuKind::Partition:
      for (const auto& e : menu.entries()) {
        FactorBlock b;
        b.price = e.price;
        for (ItemMask rest = e.items; rest != 0; rest &= rest - 1) {
          b.items.push_back(std::countr_zero(rest));
        }
        blocks.push_back(std::move(b));
      }
      break;
    case MenuKind::Explicit:
      throw UnsupportedMenuAtScale("explicit menus do not factor into blocks");
  }
  return blocks;
}

ItemMask factor_block_of(const Menu& menu, int i) {
  switch (menu.kind()) {
    case MenuKind::GrandBundle:
      if (menu.item_count() > kMaxMaskItems) {
        throw UnsupportedMenuAtScale("block masks support at most 25 items");
      }
      return menu.all_items();
    case MenuKind::Partition:
      for (const auto& e : menu.entries()) {
        if ((e.items >> i) & 1u) return e.items;
      }
      return 0;
    case MenuKind::Explicit:
      throw UnsupportedMenuAtScale("explicit menus do not factor into blocks");
  }
  return 0;
}

Tick factor_block_price(const Menu& menu, int i) {
  switch (menu.kind()) {
    case MenuKind::GrandBundle:
      return menu.grand_price_ticks();
    case MenuKind::Partition:
      for (const auto& e : menu.entries()) {
        if ((e.items >> i) & 1u) return e.price;
      }
      return kInfTicks;
    case MenuKind::Explicit:
      throw UnsupportedMenuAtScale("explicit menus do not factor into blocks");
  }
  return kInfTicks;
}

Money seller_utility_enumeration(const MarketInstance& inst, const Menu& menu,
                                 const StrategyProfile& profile, int i) {
  return enumerate_expected(inst, menu, profile).sellers[static_cast<std::size_t>(i)];
}

Money principal_revenue_enumeration(const MarketInstance& inst, const Menu& menu,
                                    const StrategyProfile& profile) {
  return enumerate_expected(inst, menu, profile).principal;
}

bool enumeration_uses_lex_tiebreak(const MarketInstance& inst, const Menu& menu,
                                   const StrategyProfile& profile) {
  return enumerate_expected(inst, menu, profile).lex_used;
}

Money seller_utility_factorized(const MarketInstance& inst, const Menu& menu,
                                const StrategyProfile& profile, int i) {
  check_profile(inst, profile);
  const auto& d = inst.items[static_cast<std::size_t>(i)];
  const auto& s = profile[static_cast<std::size_t>(i)];

  const auto blocks = menu_blocks(menu);
  const FactorBlock* mine = nullptr;
  for (const auto& b : blocks) {
    if (std::find(b.items.begin(), b.items.end(), i) != b.items.end()) {
      mine = &b;
      break;
    }
  }
  if (mine == nullptr || mine->price == kInfTicks) {
    return expected_seller_revenue(d, s, inst.grid);  // no principal competition
  }

  // Law of sum_{j in block, j != i} min(v_j, q_j).
  Pmf rivals = pmf_point(0);
  for (const int j : mine->items) {
    if (j == i) continue;
    rivals = convolve(rivals, min_value_law(inst.items[static_cast<std::size_t>(j)],
                                            profile[static_cast<std::size_t>(j)]));
  }
  const Cdf cdf = make_cdf(rivals);
  double u = 0.0;
  for (std::size_t k = 0; k < s.ticks.size(); ++k) {
    const Tick a = s.ticks[k];
    if (a > mine->price) continue;  // bundle undercuts i at every value profile
    u += s.probs[k] * revenue_at(d, inst.grid.value(a)) * cdf.at_most(mine->price - a);
  }
  return u;
}

Money principal_revenue_factorized(const MarketInstance& inst, const Menu& menu,
                                   const StrategyProfile& profile) {
  check_profile(inst, profile);
  double rev = 0.0;
  for (const auto& b : menu_blocks(menu)) {
    if (b.price == kInfTicks) continue;  // block never sells
    Pmf sum = pmf_point(0);
    for (const int j : b.items) {
      sum = convolve(sum, min_value_law(inst.items[static_cast<std::size_t>(j)],
                                        profile[static_cast<std::size_t>(j)]));
    }
    rev += inst.grid.value(b.price) * make_cdf(sum).greater(b.price);
  }
  return rev;
}

Money seller_utility(const MarketInstance& inst, const Menu& menu, const StrategyProfile& profile,
                     int i) {
  if (menu.kind() == MenuKind::Explicit) return seller_utility_enumeration(inst, menu, profile, i);
  return seller_utility_factorized(inst, menu, profile, i);
}

Money principal_revenue(const MarketInstance& inst, const Menu& menu,
                        const StrategyProfile& profile) {
  if (menu.kind() == MenuKind::Explicit) return principal_revenue_enumeration(inst, menu, profile);
  return principal_revenue_factorized(inst, menu, profile);
}

}  // namespace bundleduel
