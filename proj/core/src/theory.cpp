#include "bundleduel/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bundleduel/errors.hpp"
#include "bundleduel/sensitivity.hpp"

namespace bundleduel {

Money truncated_welfare(const MarketInstance& inst) {
  Money total = 0.0;
  for (const auto& d : inst.items) total += truncated_mean(d, myerson_price(d));
  return total;
}

bool upper_bound_check(const MarketInstance& inst, const EquilibriumCertificate& cert,
                       Money slack) {
  return cert.principal_revenue <= truncated_welfare(inst) + slack;
}

BenchmarkReport bundle_price_formula(const MarketInstance& inst) {
  BenchmarkReport rep;
  const std::size_t m = inst.items.size();

  std::vector<double> rem(m, 0.0);
  double var_sum = 0.0;
  double max_r = 0.0;
  double min_cdf4 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& d = inst.items[i];
    const Money r = myerson_price(d);
    rep.myerson_prices.push_back(r);
    const double cdf = cdf_strict(d, r);
    rep.strict_cdf_at_r.push_back(cdf);
    min_cdf4 = std::min(min_cdf4, cdf * cdf * cdf * cdf);
    rem[i] = r - truncated_mean(d, r);
    var_sum += truncated_variance(d, r);
    max_r = std::max(max_r, r);
    rep.truncated_welfare += truncated_mean(d, r);
  }
  rep.sigma_truncated = std::sqrt(var_sum);

  const double rem_max = *std::max_element(rem.begin(), rem.end());
  const double rem_min = *std::min_element(rem.begin(), rem.end());
  if (rem_min > 0.0) {
    rep.K = rem_max / rem_min;
  } else {
    rep.K = (rem_max > 0.0) ? std::numeric_limits<double>::infinity() : 1.0;
  }
  rep.C = 1.0 - min_cdf4 / (8.0 * rep.K + 1.0);

  if (rep.C > 0.0 && rep.C < 1.0) {
    rep.lambda_min = std::numeric_limits<double>::infinity();
    for (const auto& d : inst.items) {
      const double lam = sensitivity_lambda(d, rep.C).lambda;
      rep.lambda_per_item.push_back(lam);
      rep.lambda_min = std::min(rep.lambda_min, lam);
    }
  } else {
    // Degenerate discount (some item has no mass below its Myerson price):
    // the sensitivity premise is vacuous and the hypothesis cannot hold.
    rep.lambda_per_item.assign(m, 0.0);
    rep.lambda_min = 0.0;
  }

  rep.breakdown.lambda_positive = rep.lambda_min > 0.0;
  const double shrink = rep.lambda_min * (1.0 - rep.C);
  rep.breakdown.sigma_threshold = (shrink > 0.0)
                                      ? 12.0 / (shrink * std::sqrt(shrink)) * max_r
                                      : std::numeric_limits<double>::infinity();
  rep.breakdown.sigma_large_enough = rep.sigma_truncated >= rep.breakdown.sigma_threshold;
  rep.hypothesis_ok = rep.breakdown.lambda_positive && rep.breakdown.sigma_large_enough;

  rep.bundle_price = rep.sigma_truncated / 4.0;
  for (std::size_t i = 0; i < m; ++i) {
    rep.bundle_price += truncated_mean(inst.items[i], rep.C * rep.myerson_prices[i]);
  }
  return rep;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

struct SummandMoments {
  double mean = 0.0;
  double variance = 0.0;
  double abs3 = 0.0;
};

SummandMoments summand_moments(const DiscreteDistribution& d) {
  // Full (untruncated) central moments: truncating at the top of the support
  // leaves the distribution unchanged.
  const Money top = d.max_support();
  SummandMoments mm;
  mm.mean = truncated_mean(d, top);
  mm.variance = truncated_variance(d, top);
  mm.abs3 = truncated_abs3(d, top);
  return mm;
}

}  // namespace

double berry_esseen_delta(std::span<const DiscreteDistribution> summands) {
  double var_sum = 0.0;
  double worst_ratio = 0.0;
  for (const auto& d : summands) {
    const SummandMoments mm = summand_moments(d);
    if (!(mm.variance > 0.0)) {
      throw ZeroVarianceSummand("every summand needs positive variance");
    }
    var_sum += mm.variance;
    worst_ratio = std::max(worst_ratio, mm.abs3 / mm.variance);
  }
  return 0.5606 * worst_ratio / std::sqrt(var_sum);
}

double kolmogorov_distance_to_normal(std::span<const DiscreteDistribution> summands) {
  if (summands.empty()) throw ZeroVarianceSummand("need at least one summand");
  const ValueGrid grid = summands.front().grid();
  double mean_sum = 0.0;
  double var_sum = 0.0;
  std::vector<Pmf> pmfs;
  for (const auto& d : summands) {
    if (d.grid().step != grid.step) throw OffGridValue("summands must share one value grid");
    const SummandMoments mm = summand_moments(d);
    if (!(mm.variance > 0.0)) {
      throw ZeroVarianceSummand("every summand needs positive variance");
    }
    mean_sum += mm.mean;
    var_sum += mm.variance;
    Pmf p;
    p.mass.assign(static_cast<std::size_t>(d.max_support_tick()) + 1, 0.0);
    for (const Atom& a : d.atoms()) {
      p.mass[static_cast<std::size_t>(a.tick)] = a.prob;
      p.nz.push_back(a.tick);
    }
    pmfs.push_back(std::move(p));
  }
  const Pmf sum = full_convolution(pmfs);
  const double sigma = std::sqrt(var_sum);

  double sup = 0.0;
  double below = 0.0;  // CDF just left of the current atom
  for (const Tick t : sum.nz) {
    const double z = (grid.value(t) - mean_sum) / sigma;
    const double phi = normal_cdf(z);
    sup = std::max(sup, std::fabs(phi - below));  // approach from the left
    below += sum.mass[static_cast<std::size_t>(t)];
    sup = std::max(sup, std::fabs(phi - below));  // at the atom
  }
  return sup;
}

Money supremum_bound(const MarketInstance& inst, const StrategyProfile& profile) {
  validate_profile(inst, profile);
  Money total = 0.0;
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    total += truncated_mean(inst.items[i], inst.grid.value(profile[i].support_max()));
  }
  return total;
}

Money rev_plus_welfare_value(const MarketInstance& inst, ItemMask y, ItemMask z) {
  if (inst.item_count() > kMaxMaskItems) {
    throw UnsupportedMenuAtScale("item masks support at most 25 items");
  }
  const ItemMask all = (ItemMask{1} << inst.item_count()) - 1;
  if ((y & z) != 0 || (y | z) != all) {
    throw OffGridValue("Y and Z must partition the item set");
  }
  Money total = 0.0;
  for (int i = 0; i < inst.item_count(); ++i) {
    const auto& d = inst.items[static_cast<std::size_t>(i)];
    if ((y >> i) & 1u) {
      total += truncated_mean(d, myerson_price(d));
    } else {
      total += mean(d);
    }
  }
  return total;
}

bool rev_plus_welfare_bound(const MarketInstance& inst, ItemMask y, ItemMask z,
                            const EquilibriumCertificate& cert, Money slack) {
  return cert.principal_revenue <= rev_plus_welfare_value(inst, y, z) + slack;
}

}  // namespace bundleduel
