#include "doctest.h"

#include "bundleduel/convolution.hpp"

#include <cmath>
#include <vector>

using namespace bundleduel;

TEST_CASE("pmf constructors track the nonzero ticks") {
  const Pmf point = pmf_point(3);
  REQUIRE(point.nz == std::vector<Tick>{3});
  CHECK(point.at(3) == 1.0);
  CHECK(point.at(2) == 0.0);
  CHECK(point.at(-1) == 0.0);

  const Pmf dense = pmf_from_dense({0.25, 0.0, 0.75});
  CHECK(dense.nz == std::vector<Tick>{0, 2});
  CHECK(dense.max_tick() == 2);
}

TEST_CASE("min-value law under pure and mixed pricing") {
  const ValueGrid grid = make_grid(0.5, 1.0);
  const DiscreteDistribution d = binary_distribution(grid, 1.0, 0.5);  // atoms at ticks 0, 2

  const Pmf pure = min_value_law_pure(d, 2);
  CHECK(pure.at(0) == doctest::Approx(0.5));
  CHECK(pure.at(2) == doctest::Approx(0.5));

  const Pmf capped = min_value_law_pure(d, 1);
  CHECK(capped.at(0) == doctest::Approx(0.5));
  CHECK(capped.at(1) == doctest::Approx(0.5));  // the high value is cut to the price

  const MixedStrategy s = make_strategy({0, 2}, {0.5, 0.5});
  const Pmf mixed = min_value_law(d, s);
  CHECK(mixed.at(0) == doctest::Approx(0.75));  // q = 0 forces 0; else v = 0
  CHECK(mixed.at(2) == doctest::Approx(0.25));
}

TEST_CASE("leave-one-out convolutions of three fair coins") {
  const ValueGrid grid = make_grid(1.0, 1.0);
  const DiscreteDistribution coin = binary_distribution(grid, 1.0, 0.5);
  std::vector<Pmf> laws;
  for (int i = 0; i < 3; ++i) laws.push_back(min_value_law_pure(coin, 1));

  const std::vector<Pmf> loo = loo_convolutions(laws);
  REQUIRE(loo.size() == 3);
  for (const Pmf& p : loo) {
    CHECK(p.at(0) == doctest::Approx(0.25));
    CHECK(p.at(1) == doctest::Approx(0.5));
    CHECK(p.at(2) == doctest::Approx(0.25));
  }

  // Convolving each leave-one-out law with its own summand recovers the
  // full sum law.
  const Pmf full = full_convolution(laws);
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const Pmf back = convolve(loo[i], laws[i]);
    for (Tick t = 0; t <= 3; ++t) CHECK(back.at(t) == doctest::Approx(full.at(t)).epsilon(1e-14));
  }
}

TEST_CASE("an empty convolution is a point mass at zero") {
  const Pmf none = full_convolution({});
  CHECK(none.nz == std::vector<Tick>{0});
  CHECK(none.at(0) == 1.0);
}

TEST_CASE("convolution range cap throws instead of allocating") {
  const Pmf a = pmf_point(8);
  const Pmf b = pmf_point(5);
  CHECK_THROWS_AS(convolve(a, b, 10), GridOverflow);
  const Pmf ok = convolve(a, b, 13);
  CHECK(ok.at(13) == doctest::Approx(1.0));
}

TEST_CASE("cdf view and moments") {
  const Pmf p = pmf_from_dense({0.25, 0.5, 0.25});
  const Cdf cdf = make_cdf(p);
  CHECK(cdf.at_most(-1) == 0.0);
  CHECK(cdf.at_most(0) == doctest::Approx(0.25));
  CHECK(cdf.at_most(1) == doctest::Approx(0.75));
  CHECK(cdf.at_most(5) == doctest::Approx(1.0));
  CHECK(cdf.greater(1) == doctest::Approx(0.25));
  CHECK(pmf_mean(p) == doctest::Approx(1.0));
  CHECK(pmf_variance(p) == doctest::Approx(0.5));
}
