#pragma once

#include <cstdint>
#include <vector>

#include "bundleduel/grid.hpp"

namespace bundleduel {

// Item subsets as bitmasks; subset-enumeration paths require item_count <= 25.
using ItemMask = std::uint32_t;

inline constexpr int kMaxMaskItems = 25;
inline constexpr int kMaxExplicitItems = 12;

enum class MenuKind { GrandBundle, Partition, Explicit };

struct MenuEntry {
  ItemMask items = 0;
  Tick price = 0;
};

// Principal price function over subsets. Prices are grid ticks; p(empty) = 0
// always; subsets without a covering entry price kInfTicks (free disposal
// takes the cheapest covering entry otherwise).
class Menu {
 public:
  static Menu grand_bundle(int item_count, Tick price);
  // Blocks must be disjoint, non-empty, covering a subset of the items.
  static Menu partition(int item_count, std::vector<MenuEntry> blocks);
  // item_count <= 12; duplicate masks keep the cheapest price.
  static Menu explicit_menu(int item_count, std::vector<MenuEntry> entries);

  MenuKind kind() const { return kind_; }
  int item_count() const { return item_count_; }
  Tick grand_price_ticks() const { return grand_price_; }
  const std::vector<MenuEntry>& entries() const { return entries_; }  // blocks or explicit entries
  ItemMask all_items() const { return (item_count_ >= 32) ? 0 : ((ItemMask{1} << item_count_) - 1); }

  // Free-disposal closure price in ticks (kInfTicks when uncovered).
  Tick price_ticks(ItemMask subset) const;

  // The buyer's decision domain: every set the menu actually offers (the
  // empty set, the grand bundle, block unions, or listed entries). Maximizing
  // over these is equivalent to maximizing over all subsets under closure
  // prices, because any set's cheapest covering entry achieves at least the
  // same utility.
  std::vector<MenuEntry> candidate_sets() const;

 private:
  Menu() = default;
  MenuKind kind_ = MenuKind::GrandBundle;
  int item_count_ = 0;
  Tick grand_price_ = 0;
  std::vector<MenuEntry> entries_;
};

// Closure price as money; +infinity when no entry covers the subset.
Money menu_price(const Menu& menu, ItemMask subset, const ValueGrid& grid);

}  // namespace bundleduel
