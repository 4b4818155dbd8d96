#include "doctest.h"

#include "bundleduel/equilibrium.hpp"

#include <algorithm>
#include <utility>
#include <vector>

using namespace bundleduel;

namespace {

// Two i.i.d. binary(10, 0.1) items against a grand bundle one step above the
// top value: a scaled-down undercutting race with a known dominance shakeout.
MarketInstance race_instance() {
  const ValueGrid grid = make_grid(1.0, 11.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 10.0, 0.1),
                                             binary_distribution(grid, 10.0, 0.1)};
  return make_instance(grid, std::move(items));
}

}  // namespace

TEST_CASE("best response of a lone seller undercuts the bundle exactly") {
  const ValueGrid grid = make_grid(1.0, 100.0);
  MarketInstance inst = make_instance(grid, {binary_distribution(grid, 100.0, 0.1)});
  const Menu menu = Menu::grand_bundle(1, 50);
  const StrategyProfile profile = {pure_strategy(0)};
  const BestResponse br = best_response(inst, menu, profile, 0);
  CHECK(br.maximizers == std::vector<Tick>{50});
  CHECK(br.value == doctest::Approx(5.0));
  CHECK(br.highest() == 50);
}

TEST_CASE("iterated dominance shakes the undercutting race down to the top price") {
  MarketInstance inst = race_instance();
  const Menu menu = Menu::grand_bundle(2, 11);

  const DominanceResult dom = iterated_dominance(inst, menu);
  CHECK(dom.completed);
  REQUIRE(dom.surviving.size() == 2);
  CHECK(dom.surviving[0] == std::vector<Tick>{10});
  CHECK(dom.surviving[1] == std::vector<Tick>{10});

  // The last survivor standing against 10 is 9; it falls once {9, 10} is all
  // that is left.
  const bool nine_fell = std::any_of(
      dom.eliminated.begin(), dom.eliminated.end(),
      [](const DominanceElimination& e) { return e.price == 9 && e.dominator == 10; });
  CHECK(nine_fell);

  const auto pures = find_pure_equilibria(inst, menu);
  REQUIRE(pures.size() == 1);
  CHECK(pures[0].profile[0].ticks == std::vector<Tick>{10});
  CHECK(pures[0].profile[1].ticks == std::vector<Tick>{10});
  CHECK(pures[0].epsilon == 0.0);
  // Sale only when both values are high: revenue 11 * 0.01.
  CHECK(pures[0].principal_revenue == doctest::Approx(0.11));
}

TEST_CASE("a point-mass market has a unique pure equilibrium at the bundle price") {
  const ValueGrid grid = make_grid(0.1, 1.0);
  const std::vector<std::pair<Money, double>> point = {{1.0, 1.0}};
  MarketInstance inst = make_instance(grid, {make_distribution(grid, point)});
  const Menu menu = Menu::grand_bundle(1, 5);

  const auto pures = find_pure_equilibria(inst, menu);
  REQUIRE(pures.size() == 1);
  CHECK(pures[0].profile[0].ticks == std::vector<Tick>{5});
  CHECK(pures[0].principal_revenue == 0.0);

  const EquilibriumCertificate ibr = iterated_best_response(inst, menu, 1);
  CHECK(ibr.profile[0].ticks == std::vector<Tick>{5});
  CHECK(ibr.epsilon == 0.0);
}

TEST_CASE("fictitious play is deterministic per seed and certifies its endpoint") {
  const ValueGrid grid = make_grid(0.1, 1.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 1.0, 0.5),
                                             binary_distribution(grid, 1.0, 0.5)};
  MarketInstance inst = make_instance(grid, std::move(items));
  const Menu menu = Menu::grand_bundle(2, 10);

  const EquilibriumCertificate a = fictitious_play(inst, menu, 7);
  const EquilibriumCertificate b = fictitious_play(inst, menu, 7);
  REQUIRE(a.profile.size() == b.profile.size());
  for (std::size_t i = 0; i < a.profile.size(); ++i) {
    CHECK(a.profile[i].ticks == b.profile[i].ticks);
    CHECK(a.profile[i].probs == b.profile[i].probs);
  }
  CHECK(a.epsilon == b.epsilon);

  // The certificate's regret is a full-grid audit of the returned profile.
  const EquilibriumCertificate audit = verify_equilibrium(inst, menu, a.profile);
  CHECK(audit.epsilon == doctest::Approx(a.epsilon).epsilon(1e-12));
}

TEST_CASE("partition games decompose into independent blocks and recompose") {
  const ValueGrid grid = make_grid(0.1, 1.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 1.0, 0.5),
                                             binary_distribution(grid, 1.0, 0.5)};
  MarketInstance inst = make_instance(grid, std::move(items));
  const Menu menu = Menu::partition(2, {{0b01, 3}, {0b10, 4}});

  const auto subs = partition_decompose(inst, menu);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0].items == std::vector<int>{0});
  CHECK(subs[0].instance.item_count() == 1);
  CHECK(subs[0].menu.grand_price_ticks() == 3);
  CHECK(subs[1].menu.grand_price_ticks() == 4);

  const StrategyProfile whole =
      compose_profiles(inst, subs, {{pure_strategy(2)}, {pure_strategy(3)}});
  REQUIRE(whole.size() == 2);
  CHECK(whole[0].ticks == std::vector<Tick>{2});
  CHECK(whole[1].ticks == std::vector<Tick>{3});

  // Each block is an undercutting monopoly: the seller stops at the block
  // price and the principal never sells.
  const SolveReport report = solve_all(inst, menu);
  REQUIRE(!report.equilibria.empty());
  const auto& best = report.equilibria.front();
  CHECK(best.profile[0].ticks == std::vector<Tick>{3});
  CHECK(best.profile[1].ticks == std::vector<Tick>{4});
  CHECK(best.principal_revenue == 0.0);
  CHECK(best.epsilon <= 1e-9);
}

TEST_CASE("an uncovered item becomes an unbuyable-bundle monopoly subgame") {
  const ValueGrid grid = make_grid(0.1, 1.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 1.0, 0.5),
                                             binary_distribution(grid, 1.0, 0.5)};
  MarketInstance inst = make_instance(grid, std::move(items));
  const Menu menu = Menu::partition(2, {{0b10, 4}});

  const auto subs = partition_decompose(inst, menu);
  REQUIRE(subs.size() == 2);
  const auto uncovered =
      std::find_if(subs.begin(), subs.end(),
                   [](const SubGame& s) { return s.items == std::vector<int>{0}; });
  REQUIRE(uncovered != subs.end());
  CHECK(uncovered->menu.price_ticks(0b1) == kInfTicks);
}

TEST_CASE("pure brute force refuses oversized grids instead of grinding") {
  const ValueGrid grid = make_grid(0.01, 30.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 30.0, 0.5),
                                             binary_distribution(grid, 30.0, 0.5)};
  MarketInstance inst = make_instance(grid, std::move(items));
  const Menu menu = Menu::grand_bundle(2, 1000);
  CHECK_THROWS_AS(find_pure_equilibria(inst, menu), BudgetExceeded);
}

TEST_CASE("coordination profiles splitting the bundle price are exact equilibria") {
  // Two point masses at 1.0 against a bundle at exactly 1.0. Every (a, 1-a)
  // split leaves the bundle tied and unsold with zero regret; the all-top
  // profile (1.0, 1.0) is the one equilibrium where the bundle sells.
  const ValueGrid grid = make_grid(0.25, 1.0);
  const std::vector<std::pair<Money, double>> point = {{1.0, 1.0}};
  MarketInstance inst =
      make_instance(grid, {make_distribution(grid, point), make_distribution(grid, point)});
  const Menu menu = Menu::grand_bundle(2, 4);

  const auto pures = find_pure_equilibria(inst, menu);
  REQUIRE(pures.size() == 6);
  int splits = 0;
  int sales = 0;
  for (const auto& cert : pures) {
    CHECK(cert.epsilon == 0.0);
    const Tick a = cert.profile[0].ticks[0];
    const Tick b = cert.profile[1].ticks[0];
    if (a + b == 4) {
      ++splits;
      CHECK(cert.principal_revenue == 0.0);
    } else {
      ++sales;
      CHECK(a == 4);
      CHECK(b == 4);
      CHECK(cert.principal_revenue == doctest::Approx(1.0));
    }
  }
  CHECK(splits == 5);
  CHECK(sales == 1);

  // The 2-seller support enumeration must certify whatever it returns.
  const auto mixed = enumerate_mixed_2seller(inst, menu);
  CHECK(!mixed.empty());
  for (const auto& cert : mixed) {
    const auto audit = verify_equilibrium(inst, menu, cert.profile);
    CHECK(audit.epsilon <= 1e-9);
  }
}

TEST_CASE("solve_all deduplicates and reports the budget path it took") {
  MarketInstance inst = race_instance();
  const Menu menu = Menu::grand_bundle(2, 11);
  SolverOptions opts;
  opts.seeds = {1, 2};
  const SolveReport report = solve_all(inst, menu, opts);
  CHECK(report.pure_search_ran);
  CHECK(!report.budget_hit);
  REQUIRE(report.equilibria.size() == 1);
  CHECK(report.equilibria[0].profile[0].ticks == std::vector<Tick>{10});
  CHECK(report.equilibria[0].principal_revenue == doctest::Approx(0.11));
}
