#include "doctest.h"

#include "bundleduel/payoff.hpp"

#include <cmath>
#include <utility>
#include <vector>

using namespace bundleduel;

namespace {

MarketInstance coin_pair_instance() {
  const ValueGrid grid = make_grid(0.25, 1.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 1.0, 0.5),
                                             binary_distribution(grid, 1.0, 0.5)};
  return make_instance(grid, std::move(items));
}

}  // namespace

TEST_CASE("single-seller utilities against a grand bundle, by hand") {
  const ValueGrid grid = make_grid(1.0, 100.0);
  MarketInstance inst = make_instance(grid, {binary_distribution(grid, 100.0, 0.1)});
  const Menu menu = Menu::grand_bundle(1, 50);

  // Nobody else competes, so the seller sells whenever q <= p; at q = p the
  // buyer's bundle tie breaks against the principal and the seller keeps it.
  StrategyProfile profile = {pure_strategy(40)};
  CHECK(seller_utility(inst, menu, profile, 0) == doctest::Approx(4.0));
  profile[0] = pure_strategy(50);
  CHECK(seller_utility(inst, menu, profile, 0) == doctest::Approx(5.0));
  profile[0] = pure_strategy(60);
  CHECK(seller_utility(inst, menu, profile, 0) == doctest::Approx(0.0));

  // The principal needs min(v, q) > 50, which requires q > 50 and v = 100.
  profile[0] = pure_strategy(40);
  CHECK(principal_revenue(inst, menu, profile) == doctest::Approx(0.0));
  profile[0] = pure_strategy(60);
  CHECK(principal_revenue(inst, menu, profile) == doctest::Approx(5.0));
  CHECK(principal_revenue_enumeration(inst, menu, profile) == doctest::Approx(5.0));
}

TEST_CASE("a seller outside every block is an unopposed monopolist") {
  const ValueGrid grid = make_grid(0.25, 1.0);
  MarketInstance inst = coin_pair_instance();
  const Menu menu = Menu::partition(2, {{0b01, 2}});

  StrategyProfile profile = {pure_strategy(3), pure_strategy(3)};
  // Item 2 has no covering block: its seller earns Rev(q) outright.
  CHECK(seller_utility(inst, menu, profile, 1) ==
        doctest::Approx(revenue_at(inst.items[1], grid.value(3))));
  CHECK(seller_utility_enumeration(inst, menu, profile, 1) ==
        doctest::Approx(seller_utility_factorized(inst, menu, profile, 1)));
}

TEST_CASE("factorized and enumerated payoffs agree on a mixed profile") {
  MarketInstance inst = coin_pair_instance();
  const Menu menu = Menu::partition(2, {{0b11, 5}});
  const StrategyProfile profile = {make_strategy({2, 4}, {0.5, 0.5}), pure_strategy(3)};

  for (int i = 0; i < 2; ++i) {
    const Money a = seller_utility_factorized(inst, menu, profile, i);
    const Money b = seller_utility_enumeration(inst, menu, profile, i);
    CHECK(std::fabs(a - b) <= 1e-12);
  }
  const Money pa = principal_revenue_factorized(inst, menu, profile);
  const Money pb = principal_revenue_enumeration(inst, menu, profile);
  CHECK(std::fabs(pa - pb) <= 1e-12);
}

TEST_CASE("factor blocks expose the menu's competitive structure") {
  const Menu gb = Menu::grand_bundle(3, 9);
  CHECK(factor_block_of(gb, 1) == 0b111);
  CHECK(factor_block_price(gb, 1) == 9);

  const Menu part = Menu::partition(3, {{0b011, 4}});
  CHECK(factor_block_of(part, 0) == 0b011);
  CHECK(factor_block_of(part, 2) == 0);  // uncovered

  const auto blocks = menu_blocks(part);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].items == std::vector<int>{0, 1});
  CHECK(blocks[0].price == 4);

  const auto gb_blocks = menu_blocks(gb);
  REQUIRE(gb_blocks.size() == 1);
  CHECK(gb_blocks[0].items == std::vector<int>{0, 1, 2});
}

TEST_CASE("lex tie-break reachability is reported for explicit menus") {
  const ValueGrid grid = make_grid(0.1, 0.5);
  const std::vector<std::pair<Money, double>> point = {{0.5, 1.0}};
  MarketInstance inst =
      make_instance(grid, {make_distribution(grid, point), make_distribution(grid, point)});
  const StrategyProfile profile = {pure_strategy(5), pure_strategy(5)};

  const Menu tied = Menu::explicit_menu(2, {{0b01, 3}, {0b10, 3}});
  CHECK(enumeration_uses_lex_tiebreak(inst, tied, profile));

  const Menu apart = Menu::explicit_menu(2, {{0b01, 2}, {0b10, 3}});
  CHECK(!enumeration_uses_lex_tiebreak(inst, apart, profile));
}

TEST_CASE("explicit-menu enumeration refuses more than four items") {
  const ValueGrid grid = make_grid(0.25, 1.0);
  std::vector<DiscreteDistribution> items;
  for (int i = 0; i < 5; ++i) items.push_back(binary_distribution(grid, 1.0, 0.5));
  MarketInstance inst = make_instance(grid, std::move(items));
  StrategyProfile profile(5, pure_strategy(2));
  const Menu menu = Menu::explicit_menu(5, {{0b00011, 2}, {0b11100, 3}});
  CHECK_THROWS_AS(seller_utility_enumeration(inst, menu, profile, 0), UnsupportedMenuAtScale);
}
