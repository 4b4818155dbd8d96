#include "doctest.h"

#include "bundleduel/theory.hpp"

#include <cmath>
#include <utility>
#include <vector>

using namespace bundleduel;

namespace {

MarketInstance coins(int m, Money step = 0.01) {
  const ValueGrid grid = make_grid(step, 1.0);
  std::vector<DiscreteDistribution> items;
  for (int i = 0; i < m; ++i) items.push_back(binary_distribution(grid, 1.0, 0.5));
  return make_instance(grid, std::move(items));
}

EquilibriumCertificate cert_with_revenue(int m, Money revenue) {
  EquilibriumCertificate cert;
  cert.profile.assign(static_cast<std::size_t>(m), pure_strategy(0));
  cert.per_seller_regret.assign(static_cast<std::size_t>(m), 0.0);
  cert.principal_revenue = revenue;
  return cert;
}

}  // namespace

TEST_CASE("truncated welfare sums the truncated means at the reserve prices") {
  const ValueGrid grid = make_grid(1.0, 100.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 100.0, 0.1),
                                             binary_distribution(grid, 100.0, 0.1)};
  MarketInstance inst = make_instance(grid, std::move(items));
  CHECK(truncated_welfare(inst) == doctest::Approx(20.0));
  CHECK(upper_bound_check(inst, cert_with_revenue(2, 19.0)));
  CHECK(!upper_bound_check(inst, cert_with_revenue(2, 21.0)));
}

TEST_CASE("price recommendation on four fair coins, recomputed by hand") {
  MarketInstance inst = coins(4);
  const BenchmarkReport report = bundle_price_formula(inst);

  // All items identical: K = 1; F(r)^4 = 0.5^4; C = 1 - 0.0625 / 9.
  const double c = 1.0 - 0.0625 / 9.0;
  CHECK(report.K == doctest::Approx(1.0));
  CHECK(report.C == doctest::Approx(c).epsilon(1e-12));
  // Var(min(v, 1)) = 1/4 per coin.
  CHECK(report.sigma_truncated == doctest::Approx(1.0));
  CHECK(report.truncated_welfare == doctest::Approx(2.0));
  // mu(C * r) = 0.5 * C per coin, plus sigma / 4.
  CHECK(report.bundle_price == doctest::Approx(4.0 * 0.5 * c + 0.25).epsilon(1e-12));

  REQUIRE(report.myerson_prices.size() == 4);
  CHECK(report.myerson_prices[0] == doctest::Approx(1.0));
  CHECK(report.strict_cdf_at_r[0] == doctest::Approx(0.5));
  // The drop rate of Rev(x) = x/2 is 1/2 at every feasible discount.
  CHECK(report.lambda_min == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(report.breakdown.lambda_positive);

  // sigma = 1 is nowhere near 12 / (lambda (1 - C))^{3/2}: the price-formula
  // hypothesis honestly fails at this scale.
  const double threshold = 12.0 / std::pow(0.5 * (1.0 - c), 1.5);
  CHECK(report.breakdown.sigma_threshold == doctest::Approx(threshold).epsilon(1e-6));
  CHECK(!report.breakdown.sigma_large_enough);
  CHECK(!report.hypothesis_ok);
}

TEST_CASE("an equal-revenue item zeroes lambda and voids the hypothesis") {
  const ValueGrid grid = make_grid(1.0, 4.0);
  const std::vector<std::pair<Money, double>> atoms = {{1.0, 0.5}, {2.0, 0.25}, {4.0, 0.25}};
  MarketInstance inst = make_instance(grid, {make_distribution(grid, atoms)});
  const BenchmarkReport report = bundle_price_formula(inst);
  CHECK(report.lambda_min == 0.0);
  CHECK(!report.breakdown.lambda_positive);
  CHECK(!report.hypothesis_ok);
}

TEST_CASE("normal-approximation bound for 25 balanced two-point summands") {
  const ValueGrid grid = make_grid(1.0, 2.0);
  std::vector<DiscreteDistribution> summands;
  for (int i = 0; i < 25; ++i) summands.push_back(binary_distribution(grid, 2.0, 0.5));

  // Each summand has sigma_i = 1 and rho_i = E|X - 1|^3 = 1.
  const double delta = berry_esseen_delta(summands);
  CHECK(delta == doctest::Approx(0.5606 / 5.0).epsilon(1e-12));

  const double dist = kolmogorov_distance_to_normal(summands);
  CHECK(dist > 0.0);
  CHECK(dist <= delta);
}

TEST_CASE("a single coin's exact distance to the normal is the atom gap") {
  const ValueGrid grid = make_grid(1.0, 2.0);
  std::vector<DiscreteDistribution> summands = {binary_distribution(grid, 2.0, 0.5)};
  // Standardized, the sum is -1 or +1; the worst gap sits at the atoms.
  const double dist = kolmogorov_distance_to_normal(summands);
  CHECK(dist == doctest::Approx(normal_cdf(1.0) - 0.5));
}

TEST_CASE("zero-variance summands are rejected") {
  const ValueGrid grid = make_grid(1.0, 2.0);
  std::vector<DiscreteDistribution> summands = {binary_distribution(grid, 2.0, 0.5),
                                                make_distribution_ticks(grid, {{1, 1.0}})};
  CHECK_THROWS_AS(berry_esseen_delta(summands), ZeroVarianceSummand);
  CHECK_THROWS_AS(kolmogorov_distance_to_normal(summands), ZeroVarianceSummand);
}

TEST_CASE("normal cdf basics") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-6));
  CHECK(normal_cdf(-1.3) == doctest::Approx(1.0 - normal_cdf(1.3)).epsilon(1e-12));
}

TEST_CASE("supremum bound caps revenue by the support tops") {
  const ValueGrid grid = make_grid(1.0, 100.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 100.0, 0.1),
                                             binary_distribution(grid, 100.0, 0.1)};
  MarketInstance inst = make_instance(grid, std::move(items));
  const StrategyProfile profile = {pure_strategy(40), make_strategy({30, 60}, {0.5, 0.5})};
  // truncated_mean at 40 and at 60: 4 + 6.
  CHECK(supremum_bound(inst, profile) == doctest::Approx(10.0));
}

TEST_CASE("revenue-plus-welfare split bound over a partition of the items") {
  const ValueGrid grid = make_grid(1.0, 100.0);
  std::vector<DiscreteDistribution> items = {binary_distribution(grid, 100.0, 0.1),
                                             binary_distribution(grid, 100.0, 0.1)};
  MarketInstance inst = make_instance(grid, std::move(items));
  // mu_1(r_1) + E[v_2] = 10 + 10.
  CHECK(rev_plus_welfare_value(inst, 0b01, 0b10) == doctest::Approx(20.0));
  CHECK(rev_plus_welfare_bound(inst, 0b01, 0b10, cert_with_revenue(2, 19.0)));
  CHECK(!rev_plus_welfare_bound(inst, 0b01, 0b10, cert_with_revenue(2, 21.0)));
  CHECK_THROWS_AS(rev_plus_welfare_value(inst, 0b01, 0b01), OffGridValue);
}
