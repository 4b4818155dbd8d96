#include "doctest.h"

#include "bundleduel/distribution.hpp"

#include <utility>
#include <vector>

using namespace bundleduel;

TEST_CASE("value grid snaps near-lattice values and rejects off-grid ones") {
  const ValueGrid grid = make_grid(0.25, 2.0);
  CHECK(grid.max_tick == 8);
  CHECK(grid.to_tick(0.75) == 3);
  CHECK(grid.to_tick(0.7500000001) == 3);  // within the 1e-9 snap tolerance
  CHECK(grid.value(5) == doctest::Approx(1.25));
  CHECK_THROWS_AS(grid.to_tick(0.8), OffGridValue);
  CHECK(!grid.snap(-1.0).has_value());
  CHECK(!grid.snap(1.0 / 0.0).has_value());
}

TEST_CASE("make_grid validates step and max_value") {
  CHECK_THROWS_AS(make_grid(0.0, 1.0), OffGridValue);
  CHECK_THROWS_AS(make_grid(-0.5, 1.0), OffGridValue);
  CHECK_THROWS_AS(make_grid(0.1, 0.05), OffGridValue);  // max below one step
  CHECK_THROWS_AS(make_grid(0.3, 1.0), OffGridValue);   // max not a multiple of step
}

TEST_CASE("make_distribution sorts, merges, and validates atoms") {
  const ValueGrid grid = make_grid(1.0, 4.0);
  const std::vector<std::pair<Money, double>> atoms = {
      {2.0, 0.10}, {1.0, 0.50}, {2.0, 0.15}, {4.0, 0.25}};
  const DiscreteDistribution d = make_distribution(grid, atoms);

  REQUIRE(d.atoms().size() == 3);
  CHECK(d.atoms()[0].tick == 1);
  CHECK(d.atoms()[0].prob == doctest::Approx(0.50));
  CHECK(d.atoms()[1].tick == 2);
  CHECK(d.atoms()[1].prob == doctest::Approx(0.25));
  CHECK(d.atoms()[2].tick == 4);
  CHECK(d.max_support() == doctest::Approx(4.0));

  const std::vector<std::pair<Money, double>> short_sum = {{1.0, 0.5}};
  CHECK_THROWS_AS(make_distribution(grid, short_sum), ProbSumMismatch);
  const std::vector<std::pair<Money, double>> all_zero = {{0.0, 1.0}};
  CHECK_THROWS_AS(make_distribution(grid, all_zero), TrivialDistribution);
  const std::vector<std::pair<Money, double>> off_grid = {{0.5, 1.0}};
  CHECK_THROWS_AS(make_distribution(grid, off_grid), OffGridValue);
  const std::vector<std::pair<Money, double>> out_of_range = {{5.0, 1.0}};
  CHECK_THROWS_AS(make_distribution(grid, out_of_range), OffGridValue);
}

TEST_CASE("cdf, tail, and revenue are exact on an equal-revenue distribution") {
  const ValueGrid grid = make_grid(1.0, 4.0);
  const std::vector<std::pair<Money, double>> atoms = {{1.0, 0.5}, {2.0, 0.25}, {4.0, 0.25}};
  const DiscreteDistribution d = make_distribution(grid, atoms);

  CHECK(cdf_strict(d, 1.0) == 0.0);  // strict: Pr[v < 1]
  CHECK(cdf_strict(d, 2.0) == doctest::Approx(0.5));
  CHECK(cdf_strict(d, 4.0) == doctest::Approx(0.75));
  CHECK(cdf_strict(d, 5.0) == doctest::Approx(1.0));
  CHECK(prob_at_least(d, 0.0) == doctest::Approx(1.0));
  CHECK(prob_at_least(d, 2.0) == doctest::Approx(0.5));
  CHECK(revenue_at(d, 1.0) == doctest::Approx(1.0));
  CHECK(revenue_at(d, 2.0) == doctest::Approx(1.0));
  CHECK(revenue_at(d, 4.0) == doctest::Approx(1.0));
  CHECK(revenue_at(d, 3.0) == doctest::Approx(0.75));

  // All three support points maximize revenue; ties resolve to the largest.
  CHECK(myerson_tick(d) == 4);
  CHECK(myerson_price(d) == doctest::Approx(4.0));
}

TEST_CASE("myerson price picks the interior maximizer when it is strict") {
  const ValueGrid grid = make_grid(1.0, 10.0);
  const std::vector<std::pair<Money, double>> atoms = {{2.0, 0.9}, {10.0, 0.1}};
  const DiscreteDistribution d = make_distribution(grid, atoms);
  // Rev(2) = 2, Rev(10) = 1.
  CHECK(myerson_tick(d) == 2);
}

TEST_CASE("binary distribution moments truncated at half the support") {
  const ValueGrid grid = make_grid(1.0, 100.0);
  const DiscreteDistribution d = binary_distribution(grid, 100.0, 0.1);

  REQUIRE(d.atoms().size() == 2);
  CHECK(d.atoms()[0].tick == 0);
  CHECK(d.atoms()[0].prob == doctest::Approx(0.9));
  CHECK(d.atoms()[1].tick == 100);

  CHECK(mean(d) == doctest::Approx(10.0));
  // min(v, 50) is 0 w.p. 0.9 and 50 w.p. 0.1.
  CHECK(truncated_mean(d, 50.0) == doctest::Approx(5.0));
  CHECK(truncated_variance(d, 50.0) == doctest::Approx(225.0));
  CHECK(truncated_abs3(d, 50.0) == doctest::Approx(0.9 * 125.0 + 0.1 * 91125.0));
  CHECK(truncated_mean(d, 200.0) == doctest::Approx(10.0));  // cap above the support
  // The truncation point may sit off the grid.
  CHECK(truncated_mean(d, 49.5) == doctest::Approx(4.95));

  const DiscreteDistribution t = truncate(d, 50.0);
  REQUIRE(t.atoms().size() == 2);
  CHECK(t.atoms()[1].tick == 50);
  CHECK(t.atoms()[1].prob == doctest::Approx(0.1));
}

TEST_CASE("make_distribution_ticks matches the money-valued constructor") {
  const ValueGrid grid = make_grid(0.5, 2.0);
  const DiscreteDistribution a = make_distribution_ticks(grid, {{1, 0.25}, {4, 0.75}});
  const std::vector<std::pair<Money, double>> atoms = {{0.5, 0.25}, {2.0, 0.75}};
  const DiscreteDistribution b = make_distribution(grid, atoms);
  REQUIRE(a.atoms().size() == b.atoms().size());
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    CHECK(a.atoms()[i].tick == b.atoms()[i].tick);
    CHECK(a.atoms()[i].prob == doctest::Approx(b.atoms()[i].prob));
  }
}
