#pragma once

#include <span>
#include <vector>

#include "bundleduel/equilibrium.hpp"

namespace bundleduel {

// Sum of truncated means at each item's Myerson price: the unconditional
// ceiling on principal revenue at any equilibrium.
Money truncated_welfare(const MarketInstance& inst);

// certificate.principal_revenue <= truncated_welfare + 1e-9. A failure on a
// certified equilibrium indicates a solver bug, not a market anomaly.
bool upper_bound_check(const MarketInstance& inst, const EquilibriumCertificate& cert,
                       Money slack = 1e-9);

// Grand-bundle price recommendation and its hypothesis checklist.
struct HypothesisBreakdown {
  bool lambda_positive = false;
  bool sigma_large_enough = false;
  double sigma_threshold = 0.0;  // 12 / (lambda*(1-C))^{3/2} * max_j r_j
};

struct BenchmarkReport {
  Money truncated_welfare = 0.0;
  double sigma_truncated = 0.0;  // sigma of sum_i min(v_i, r_i)
  double K = 1.0;                // max_i rem_i / min_i rem_i, rem_i = r_i - mu_i(r_i)
  double C = 0.0;                // 1 - min_i F_i(r_i)^4 / (8K + 1)
  double lambda_min = 0.0;       // min_i sensitivity_lambda(F_i, C).lambda
  bool hypothesis_ok = false;
  HypothesisBreakdown breakdown;
  Money bundle_price = 0.0;      // sum_i mu_i(C * r_i) + sigma / 4
  std::vector<Money> myerson_prices;
  std::vector<double> strict_cdf_at_r;
  std::vector<double> lambda_per_item;
};

BenchmarkReport bundle_price_formula(const MarketInstance& inst);

// Kolmogorov bound 0.5606 * (1/sigma) * max_i rho_i / sigma_i^2 for the
// centered normalized sum of independent summands. Throws ZeroVarianceSummand.
double berry_esseen_delta(std::span<const DiscreteDistribution> summands);

// Exact Kolmogorov distance between the normalized exact sum and N(0,1),
// checking both CDF sides at every atom.
double kolmogorov_distance_to_normal(std::span<const DiscreteDistribution> summands);

double normal_cdf(double x);

// sum_i truncated_mean(F_i, sup supp(s_i)): revenue ceiling for ANY profile.
Money supremum_bound(const MarketInstance& inst, const StrategyProfile& profile);

// Proof-shape bound for a partition Y/Z of the items: principal revenue <=
// sum_{i in Y} mu_i(r_i) + sum_{i in Z} E[v_i].
bool rev_plus_welfare_bound(const MarketInstance& inst, ItemMask y, ItemMask z,
                            const EquilibriumCertificate& cert, Money slack = 1e-9);
Money rev_plus_welfare_value(const MarketInstance& inst, ItemMask y, ItemMask z);

}  // namespace bundleduel
