#include "doctest.h"

#include "bundleduel/counterexample.hpp"

#include <vector>

using namespace bundleduel;

TEST_CASE("pair family integer identities at K = 3, n = 2") {
  const CounterexampleInstance ce = build_counterexample(3, 2);
  const CounterexampleSpec& spec = ce.spec;

  CHECK(spec.D == std::vector<std::int64_t>{3, 27});
  CHECK(spec.H == std::vector<std::int64_t>{9, 729});
  for (std::size_t i = 0; i < spec.H.size(); ++i) {
    CHECK(spec.H[i] == spec.D[i] * spec.D[i]);
    CHECK(spec.x[i] == doctest::Approx(1.0 / static_cast<double>(spec.D[i])));
    // The family is built so that H_i * x_i^2 = 1 exactly.
    CHECK(static_cast<double>(spec.H[i]) * spec.x[i] * spec.x[i] == doctest::Approx(1.0));
  }

  const MarketInstance& inst = ce.instance;
  REQUIRE(inst.item_count() == 4);
  CHECK(inst.grid.step == 1.0);
  CHECK(inst.grid.max_tick == 729);
  // Pair i holds two i.i.d. binary(H_i, 1/D_i) items whose reserve is H_i.
  CHECK(inst.items[0].atoms().back().tick == 9);
  CHECK(inst.items[0].atoms().back().prob == doctest::Approx(1.0 / 3.0));
  CHECK(inst.items[3].atoms().back().tick == 729);
  CHECK(myerson_tick(inst.items[0]) == 9);
  CHECK(myerson_tick(inst.items[2]) == 729);

  const Menu& menu = spec.partition_menu;
  CHECK(menu.kind() == MenuKind::Partition);
  REQUIRE(menu.entries().size() == 2);
  CHECK(menu.entries()[0].items == 0b0011);
  CHECK(menu.entries()[0].price == 10);  // H_1 plus one grid step
  CHECK(menu.entries()[1].items == 0b1100);
  CHECK(menu.entries()[1].price == 730);
}

TEST_CASE("pair family parameter validation and overflow guard") {
  CHECK_THROWS_AS(build_counterexample(2, 2), OffGridValue);
  CHECK_THROWS_AS(build_counterexample(3, 0), OffGridValue);
  CHECK_THROWS_AS(build_counterexample(3, 4), GridOverflow);

  // n = 3 still fits in 64-bit ticks: H_3 = 19683^2.
  const CounterexampleInstance ce = build_counterexample(3, 3);
  CHECK(ce.spec.H.back() == 387420489LL);
  CHECK(ce.instance.grid.max_tick == 387420489LL);
}

TEST_CASE("one pair alone: the partition menu earns just above one unit") {
  const CounterexampleInstance ce = build_counterexample(3, 1);
  SolverOptions opts;
  opts.seeds = {1, 2};
  const SolveReport report = solve_all(ce.instance, ce.spec.partition_menu, opts);
  REQUIRE(!report.equilibria.empty());

  // Both sellers stop at the reserve H = 9; the block at 10 sells only when
  // both values are high, for revenue 10/9.
  bool found = false;
  for (const auto& cert : report.equilibria) {
    CHECK(cert.epsilon <= 1e-9);
    if (cert.profile[0].is_pure() && cert.profile[0].ticks[0] == 9 &&
        cert.profile[1].is_pure() && cert.profile[1].ticks[0] == 9) {
      found = true;
      CHECK(cert.principal_revenue == doctest::Approx(10.0 / 9.0));
      CHECK(cert.principal_revenue >= 1.0);
    }
  }
  CHECK(found);
}

TEST_CASE("log-spaced tick prices round up onto the lattice") {
  const ValueGrid grid = make_grid(1.0, 100.0);
  CHECK(log_spaced_ticks(1.0, 100.0, 5, grid) == std::vector<Tick>{1, 4, 10, 32, 100});
  CHECK(log_spaced_ticks(1.0, 4.0, 8, grid) == std::vector<Tick>{1, 2, 3, 4});  // deduplicated
  CHECK(log_spaced_ticks(5.0, 5.0, 3, grid) == std::vector<Tick>{5});
  CHECK_THROWS_AS(log_spaced_ticks(0.0, 10.0, 5, grid), OffGridValue);
  CHECK_THROWS_AS(log_spaced_ticks(10.0, 5.0, 5, grid), OffGridValue);
  CHECK_THROWS_AS(log_spaced_ticks(1.0, 10.0, 0, grid), OffGridValue);
}

TEST_CASE("grand-bundle sweep on one pair: bands, no-sale edge, and bounds") {
  const CounterexampleInstance ce = build_counterexample(3, 1);
  SweepOptions opts;
  opts.seeds = {1, 2};
  opts.max_iters = 300;
  const std::vector<Tick> prices = {5, 18, 27, 30};
  const auto rows = grand_bundle_sweep(ce.instance, ce.spec, prices, opts);
  REQUIRE(rows.size() == 4);

  for (const auto& row : rows) {
    CHECK(row.bound_ok);
    CHECK(row.price == doctest::Approx(static_cast<double>(row.price_ticks)));
  }

  // p = 5: below 3 H_1, inside the low band; the undercutting pair stops at
  // (5, 5) and the bundle sells only when both values are high: 5/9.
  CHECK(rows[0].price_ticks == 5);
  CHECK(!rows[0].no_sale_possible);
  CHECK(rows[0].lemma_bound == 0.0);
  CHECK(rows[0].n_equilibria >= 1);
  CHECK(rows[0].max_revenue <= 5.0 + 1e-9);
  CHECK(rows[0].min_copy_sale_prob > 0.0);

  // p = 18 = 2 sum H: the sum of values can never exceed the price.
  CHECK(rows[1].no_sale_possible);
  CHECK(rows[1].n_equilibria >= 1);
  CHECK(rows[1].max_revenue == 0.0);

  // p = 27 = 3 H_1: the top band starts; revenue is exactly zero and the
  // band bound 3 / (p x^2) takes over.
  CHECK(rows[2].no_sale_possible);
  CHECK(rows[2].max_revenue == 0.0);
  CHECK(rows[2].lemma_bound == doctest::Approx(3.0 / (27.0 / 9.0)));
  CHECK(rows[3].lemma_bound == doctest::Approx(3.0 / (30.0 / 9.0)));

  // At the all-reserve equilibrium each top-pair seller still sells its copy
  // whenever its value is high: probability 1/3.
  CHECK(rows[2].min_copy_sale_prob == doctest::Approx(1.0 / 3.0));
}
