#pragma once

#include <string>
#include <vector>

#include "bundleduel/theory.hpp"

namespace bundleduel {

// One executable inequality. slack >= 0 means the inequality held (slack is
// LHS - RHS oriented so bigger is safer); hypothesis_met false means the
// lemma's precondition failed for this input, which is a report, not a bug.
struct LemmaCheck {
  std::string lemma;
  std::string detail;
  bool hypothesis_met = false;
  bool pass = false;
  double slack = 0.0;
};

// Variance of min(v_i, q_i) with q_i ~ s_i, and its mean.
double strategy_truncated_mean(const DiscreteDistribution& d, const MixedStrategy& s);
double strategy_truncated_variance(const DiscreteDistribution& d, const MixedStrategy& s);

// sigma_i^2(C r_i) >= (1 - 1/K) sigma_i^2(r_i) whenever C >= 1 - F_i(r_i)^4/(2K+1).
LemmaCheck check_const_variance_bound(const DiscreteDistribution& d, double c, double k);

// sigma_i^2(s_i) >= (1 - 2(1-C)/(C F_i(r_i)^4)) sigma_i^2(r_i) when inf supp(s_i) >= C r_i.
LemmaCheck check_bound_variance(const DiscreteDistribution& d, const MixedStrategy& s, double c);

// Mean-to-variance sandwich in product form (rem(t) = t - mu(t)):
//   E_{q~s}[sigma^2(r) - sigma^2(q)] >= 2 rem(inf s) (mu(r) - mu(s))
//   sigma^2(r) - sigma^2(s)          <= 2 rem(r)     (mu(r) - mu(s))
// Pure strategies exercise both sides of the classical sandwich at once.
LemmaCheck check_mean_to_var_lower(const DiscreteDistribution& d, const MixedStrategy& s);
LemmaCheck check_mean_to_var_upper(const DiscreteDistribution& d, const MixedStrategy& s);

// C r_i - mu_i(C r_i) >= 4/5 (r_i - mu_i(r_i)) whenever C >= 1 - F_i(r_i)^4/(8K+1), K >= 1.
LemmaCheck check_rem_bound(const DiscreteDistribution& d, double c, double k);

// sum_i Var(V_i(s_i)) >= 1/2 sum_i sigma_i^2(r_i) whenever
// C >= 1 - min_i F_i(r_i)^4 / (8 K(F) + 1) and mu(s) >= sum_i mu_i(C r_i).
LemmaCheck check_high_mean_var(const MarketInstance& inst, const StrategyProfile& profile,
                               double c);

// Every equilibrium support inside [C r_i, r_i], under the full set of
// price-formula hypotheses plus Pr[no bundle sale] >= 1/2 at the profile.
LemmaCheck check_contained_response(const MarketInstance& inst, const Menu& menu,
                                    const EquilibriumCertificate& cert,
                                    const BenchmarkReport& report, Money tol = 1e-9);

// K-ratio of the instance: max_i rem_i / min_i rem_i.
double instance_k_ratio(const MarketInstance& inst);

// Bundled runner over an instance and candidate profiles.
std::vector<LemmaCheck> lemma_suite(const MarketInstance& inst, double c, double k,
                                    const std::vector<StrategyProfile>& profiles);

}  // namespace bundleduel
