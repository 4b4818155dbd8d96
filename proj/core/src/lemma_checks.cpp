#include "bundleduel/lemma_checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace bundleduel {

namespace {

std::string format_detail(const char* fmt, double a, double b, double c, double d) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

double pow4(double x) { return x * x * x * x; }

constexpr double kSlackTol = 1e-12;

}  // namespace

double strategy_truncated_mean(const DiscreteDistribution& d, const MixedStrategy& s) {
  const Pmf law = min_value_law(d, s);
  return pmf_mean(law) * d.grid().step;
}

double strategy_truncated_variance(const DiscreteDistribution& d, const MixedStrategy& s) {
  const Pmf law = min_value_law(d, s);
  return pmf_variance(law) * d.grid().step * d.grid().step;
}

LemmaCheck check_const_variance_bound(const DiscreteDistribution& d, double c, double k) {
  LemmaCheck out;
  out.lemma = "const_variance_bound";
  const Money r = myerson_price(d);
  const double f4 = pow4(cdf_strict(d, r));
  out.hypothesis_met = k >= 1.0 && c > 0.0 && c >= 1.0 - f4 / (2.0 * k + 1.0);
  const double lhs = truncated_variance(d, c * r);
  const double rhs = (1.0 - 1.0 / k) * truncated_variance(d, r);
  out.slack = lhs - rhs;
  out.pass = !out.hypothesis_met || out.slack >= -kSlackTol;
  out.detail = format_detail("c=%.6g K=%.6g var(cr)=%.6g floor=%.6g", c, k, lhs, rhs);
  return out;
}

LemmaCheck check_bound_variance(const DiscreteDistribution& d, const MixedStrategy& s, double c) {
  LemmaCheck out;
  out.lemma = "bound_variance";
  const Money r = myerson_price(d);
  const double f4 = pow4(cdf_strict(d, r));
  const Money inf_s = d.grid().value(s.support_min());
  out.hypothesis_met = c > 0.0 && c <= 1.0 && f4 > 0.0 && inf_s >= c * r - kSlackTol;
  const double factor = 1.0 - 2.0 * (1.0 - c) / (c * f4);
  const double lhs = strategy_truncated_variance(d, s);
  const double rhs = factor * truncated_variance(d, r);
  out.slack = lhs - rhs;
  out.pass = !out.hypothesis_met || out.slack >= -kSlackTol;
  out.detail = format_detail("c=%.6g inf=%.6g var(s)=%.6g floor=%.6g", c, inf_s, lhs, rhs);
  return out;
}

LemmaCheck check_mean_to_var_lower(const DiscreteDistribution& d, const MixedStrategy& s) {
  LemmaCheck out;
  out.lemma = "mean_to_var_lower";
  const Money r = myerson_price(d);
  out.hypothesis_met = d.grid().value(s.support_max()) <= r + kSlackTol;
  const double var_r = truncated_variance(d, r);
  double expected_var_q = 0.0;
  for (std::size_t j = 0; j < s.ticks.size(); ++j) {
    expected_var_q += s.probs[j] * truncated_variance(d, d.grid().value(s.ticks[j]));
  }
  const Money inf_s = d.grid().value(s.support_min());
  const double rem_inf = inf_s - truncated_mean(d, inf_s);
  const double mean_gap = truncated_mean(d, r) - strategy_truncated_mean(d, s);
  const double lhs = var_r - expected_var_q;
  const double rhs = 2.0 * rem_inf * mean_gap;
  out.slack = lhs - rhs;
  out.pass = !out.hypothesis_met || out.slack >= -kSlackTol;
  out.detail = format_detail("drop=%.6g floor=%.6g rem(inf)=%.6g gap=%.6g", lhs, rhs, rem_inf,
                             mean_gap);
  return out;
}

LemmaCheck check_mean_to_var_upper(const DiscreteDistribution& d, const MixedStrategy& s) {
  LemmaCheck out;
  out.lemma = "mean_to_var_upper";
  const Money r = myerson_price(d);
  out.hypothesis_met = d.grid().value(s.support_max()) <= r + kSlackTol;
  const double rem_r = r - truncated_mean(d, r);
  const double mean_gap = truncated_mean(d, r) - strategy_truncated_mean(d, s);
  const double lhs = truncated_variance(d, r) - strategy_truncated_variance(d, s);
  const double rhs = 2.0 * rem_r * mean_gap;
  out.slack = rhs - lhs;
  out.pass = !out.hypothesis_met || out.slack >= -kSlackTol;
  out.detail = format_detail("drop=%.6g cap=%.6g rem(r)=%.6g gap=%.6g", lhs, rhs, rem_r, mean_gap);
  return out;
}

LemmaCheck check_rem_bound(const DiscreteDistribution& d, double c, double k) {
  LemmaCheck out;
  out.lemma = "rem_bound";
  const Money r = myerson_price(d);
  const double f4 = pow4(cdf_strict(d, r));
  out.hypothesis_met = k >= 1.0 && c > 0.0 && c <= 1.0 && c >= 1.0 - f4 / (8.0 * k + 1.0);
  const double rem_cr = c * r - truncated_mean(d, c * r);
  const double rem_r = r - truncated_mean(d, r);
  out.slack = rem_cr - 0.8 * rem_r;
  out.pass = !out.hypothesis_met || out.slack >= -kSlackTol;
  out.detail = format_detail("c=%.6g rem(cr)=%.6g rem(r)=%.6g floor=%.6g", c, rem_cr, rem_r,
                             0.8 * rem_r);
  return out;
}

LemmaCheck check_high_mean_var(const MarketInstance& inst, const StrategyProfile& profile,
                               double c) {
  validate_profile(inst, profile);
  LemmaCheck out;
  out.lemma = "high_mean_var";
  const double k = instance_k_ratio(inst);
  double min_f4 = std::numeric_limits<double>::infinity();
  double mean_s = 0.0;
  double mean_cr = 0.0;
  double var_s = 0.0;
  double var_r = 0.0;
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const auto& d = inst.items[i];
    const Money r = myerson_price(d);
    min_f4 = std::min(min_f4, pow4(cdf_strict(d, r)));
    mean_s += strategy_truncated_mean(d, profile[i]);
    mean_cr += truncated_mean(d, c * r);
    var_s += strategy_truncated_variance(d, profile[i]);
    var_r += truncated_variance(d, r);
  }
  out.hypothesis_met = c > 0.0 && c >= 1.0 - min_f4 / (8.0 * k + 1.0) &&
                       mean_s >= mean_cr - kSlackTol;
  out.slack = var_s - 0.5 * var_r;
  out.pass = !out.hypothesis_met || out.slack >= -kSlackTol;
  out.detail = format_detail("mu(s)=%.6g mu(cr)=%.6g var(s)=%.6g floor=%.6g", mean_s, mean_cr,
                             var_s, 0.5 * var_r);
  return out;
}

LemmaCheck check_contained_response(const MarketInstance& inst, const Menu& menu,
                                    const EquilibriumCertificate& cert,
                                    const BenchmarkReport& report, Money tol) {
  LemmaCheck out;
  out.lemma = "contained_response";
  double no_sale = 1.0;
  if (menu.kind() == MenuKind::GrandBundle && menu.grand_price_ticks() != kInfTicks) {
    std::vector<Pmf> laws;
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      laws.push_back(min_value_law(inst.items[i], cert.profile[i]));
    }
    no_sale = make_cdf(full_convolution(laws)).at_most(menu.grand_price_ticks());
  }
  out.hypothesis_met = report.hypothesis_ok && menu.kind() == MenuKind::GrandBundle &&
                       cert.epsilon <= tol && no_sale >= 0.5 - kSlackTol;
  out.slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const Money r = report.myerson_prices[i];
    const Money lo = inst.grid.value(cert.profile[i].support_min());
    const Money hi = inst.grid.value(cert.profile[i].support_max());
    out.slack = std::min(out.slack, lo - report.C * r);
    out.slack = std::min(out.slack, r - hi);
  }
  out.pass = !out.hypothesis_met || out.slack >= -tol;
  out.detail =
      format_detail("C=%.6g no_sale=%.6g eps=%.3g margin=%.6g", report.C, no_sale, cert.epsilon,
                    out.slack);
  return out;
}

double instance_k_ratio(const MarketInstance& inst) {
  double rem_min = std::numeric_limits<double>::infinity();
  double rem_max = 0.0;
  for (const auto& d : inst.items) {
    const Money r = myerson_price(d);
    const double rem = r - truncated_mean(d, r);
    rem_min = std::min(rem_min, rem);
    rem_max = std::max(rem_max, rem);
  }
  if (rem_min > 0.0) return rem_max / rem_min;
  return rem_max > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

std::vector<LemmaCheck> lemma_suite(const MarketInstance& inst, double c, double k,
                                    const std::vector<StrategyProfile>& profiles) {
  // Checks parameterized by K use the worst of the requested K and the
  // instance's own remainder ratio, so their hypotheses stay coherent.
  const double kk = std::max(k, instance_k_ratio(inst));
  std::vector<LemmaCheck> out;
  for (const auto& d : inst.items) {
    out.push_back(check_const_variance_bound(d, c, kk));
    out.push_back(check_rem_bound(d, c, kk));
  }
  for (const auto& profile : profiles) {
    validate_profile(inst, profile);
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      out.push_back(check_bound_variance(inst.items[i], profile[i], c));
      out.push_back(check_mean_to_var_lower(inst.items[i], profile[i]));
      out.push_back(check_mean_to_var_upper(inst.items[i], profile[i]));
    }
    out.push_back(check_high_mean_var(inst, profile, c));
  }
  return out;
}

}  // namespace bundleduel
