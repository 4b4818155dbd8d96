#include "bundleduel/menu.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace bundleduel {

namespace {

void check_entry_items(int item_count, ItemMask items) {
  if (items == 0) throw OffGridValue("menu entry must cover at least one item");
  if (item_count < 32 && (items >> item_count) != 0) {
    throw OffGridValue("menu entry references an item outside the market");
  }
}

}  // namespace

Menu Menu::grand_bundle(int item_count, Tick price) {
  if (item_count < 1) throw OffGridValue("market needs at least one item");
  if (price < 0 && price != kInfTicks) throw OffGridValue("menu price must be nonnegative");
  Menu m;
  m.kind_ = MenuKind::GrandBundle;
  m.item_count_ = item_count;
  m.grand_price_ = price;
  if (item_count <= kMaxMaskItems) {
    m.entries_.push_back(MenuEntry{m.all_items(), price});
  }
  return m;
}

Menu Menu::partition(int item_count, std::vector<MenuEntry> blocks) {
  if (item_count < 1) throw OffGridValue("market needs at least one item");
  if (item_count > kMaxMaskItems) {
    throw UnsupportedMenuAtScale("partition menus support at most 25 items");
  }
  ItemMask seen = 0;
  for (const auto& e : blocks) {
    check_entry_items(item_count, e.items);
    if (e.price < 0) throw OffGridValue("menu price must be nonnegative");
    if ((seen & e.items) != 0) throw OffGridValue("partition blocks must be disjoint");
    seen |= e.items;
  }
  Menu m;
  m.kind_ = MenuKind::Partition;
  m.item_count_ = item_count;
  m.entries_ = std::move(blocks);
  std::sort(m.entries_.begin(), m.entries_.end(),
            [](const MenuEntry& a, const MenuEntry& b) { return a.items < b.items; });
  return m;
}

Menu Menu::explicit_menu(int item_count, std::vector<MenuEntry> entries) {
  if (item_count < 1) throw OffGridValue("market needs at least one item");
  if (item_count > kMaxExplicitItems) {
    throw UnsupportedMenuAtScale("explicit menus support at most 12 items");
  }
  for (const auto& e : entries) {
    check_entry_items(item_count, e.items);
    if (e.price < 0) throw OffGridValue("menu price must be nonnegative");
  }
  Menu m;
  m.kind_ = MenuKind::Explicit;
  m.item_count_ = item_count;
  m.entries_ = std::move(entries);
  // Keep the cheapest entry per set; order by set for determinism.
  std::sort(m.entries_.begin(), m.entries_.end(), [](const MenuEntry& a, const MenuEntry& b) {
    return a.items != b.items ? a.items < b.items : a.price < b.price;
  });
  m.entries_.erase(std::unique(m.entries_.begin(), m.entries_.end(),
                               [](const MenuEntry& a, const MenuEntry& b) {
                                 return a.items == b.items;
                               }),
                   m.entries_.end());
  return m;
}

Tick Menu::price_ticks(ItemMask want) const {
  if (want == 0) return 0;
  switch (kind_) {
    case MenuKind::GrandBundle:
      return grand_price_;  // only the full bundle covers anything
    case MenuKind::Partition: {
      // Cheapest cover = union of the blocks that intersect `want`.
      Tick total = 0;
      ItemMask covered = 0;
      for (const auto& e : entries_) {
        if ((e.items & want) != 0) {
          total += e.price;
          covered |= e.items;
        }
      }
      return (want & ~covered) == 0 ? total : kInfTicks;
    }
    case MenuKind::Explicit: {
      // Free-disposal closure: cheapest listed entry covering `want`.
      Tick best = kInfTicks;
      for (const auto& e : entries_) {
        if ((want & ~e.items) == 0 && e.price < best) best = e.price;
      }
      return best;
    }
  }
  return kInfTicks;
}

std::vector<MenuEntry> Menu::candidate_sets() const {
  std::vector<MenuEntry> out;
  out.push_back(MenuEntry{0, 0});
  switch (kind_) {
    case MenuKind::GrandBundle:
      if (grand_price_ != kInfTicks) out.push_back(MenuEntry{all_items(), grand_price_});
      break;
    case MenuKind::Partition: {
      // Every union of blocks is purchasable; with disjoint blocks its
      // closure price is the sum of the selected block prices.
      const std::size_t n = entries_.size();
      if (n > 20) throw UnsupportedMenuAtScale("too many partition blocks to enumerate");
      for (std::uint32_t sub = 1; sub < (1u << n); ++sub) {
        MenuEntry cand{0, 0};
        for (std::size_t b = 0; b < n; ++b) {
          if (sub & (1u << b)) {
            cand.items |= entries_[b].items;
            cand.price += entries_[b].price;
          }
        }
        out.push_back(cand);
      }
      break;
    }
    case MenuKind::Explicit:
      // An entry's effective price is its closure price: a cheaper superset
      // entry undercuts the listed one.
      for (const auto& e : entries_) out.push_back(MenuEntry{e.items, price_ticks(e.items)});
      break;
  }
  std::sort(out.begin(), out.end(),
            [](const MenuEntry& a, const MenuEntry& b) { return a.items < b.items; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const MenuEntry& a, const MenuEntry& b) { return a.items == b.items; }),
            out.end());
  return out;
}

Money menu_price(const Menu& menu, ItemMask items, const ValueGrid& grid) {
  const Tick t = menu.price_ticks(items);
  if (t == kInfTicks) return std::numeric_limits<Money>::infinity();
  return grid.value(t);
}

}  // namespace bundleduel
