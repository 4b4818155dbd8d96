#include "bundleduel/properties.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <span>

#include "bundleduel/errors.hpp"
#include "bundleduel/generators.hpp"
#include "bundleduel/lemma_checks.hpp"
#include "bundleduel/payoff.hpp"
#include "bundleduel/theory.hpp"

namespace bundleduel {

namespace {

struct SuiteState {
  PropertyResult result;
  int trial = 0;

  void fail(const char* fmt, ...) {
    char buf[240];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    result.failures.push_back("trial " + std::to_string(trial) + ": " + buf);
  }

  // Record one slack-bearing assertion: pass iff slack >= -tol.
  void check_slack(double slack, double tol, const char* what) {
    ++result.checked;
    result.worst_slack = std::min(result.worst_slack, slack);
    if (!(slack >= -tol)) fail("%s violated by %.3e", what, -slack);
  }

  void check(bool ok, const char* what) {
    ++result.checked;
    if (!ok) fail("%s", what);
  }
};

// Independent ascending-item-list comparison (prefix-first order).
bool lex_less_oracle(ItemMask a, ItemMask b) {
  std::vector<int> la;
  std::vector<int> lb;
  for (int i = 0; i < kMaxMaskItems; ++i) {
    if ((a >> i) & 1u) la.push_back(i);
    if ((b >> i) & 1u) lb.push_back(i);
  }
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

// ---- buyer: choice optimality over every subset, tie-break chain, dual-buy
// set, and the outcome's bookkeeping fields ----
void run_buyer(SuiteState& st, Rng& rng) {
  const int m = static_cast<int>(rng.range(1, 4));
  const ValueGrid grid = make_grid(0.25, 2.0);
  const MarketInstance inst = random_instance(rng, m, grid);
  const Menu menu = random_menu(rng, m, 2 * grid.max_tick);

  std::vector<Tick> v(static_cast<std::size_t>(m));
  std::vector<Tick> q(static_cast<std::size_t>(m));
  for (auto& t : v) t = rng.range(0, grid.max_tick);
  for (auto& t : q) t = rng.range(0, grid.max_tick + 2);

  const Outcome out = buyer_choice(menu, q, v, grid);

  const auto diff_of = [&](ItemMask set) -> Tick {
    const Tick price = menu.price_ticks(set);
    if (price == kInfTicks) return std::numeric_limits<Tick>::min();
    Tick gain = 0;
    for (int i = 0; i < m; ++i) {
      if ((set >> i) & 1u) gain += std::min(v[static_cast<std::size_t>(i)],
                                            q[static_cast<std::size_t>(i)]);
    }
    return gain - price;
  };
  const auto dual_buys_of = [&](ItemMask set) {
    int n = 0;
    for (int i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (((set >> i) & 1u) && v[k] >= q[k] && q[k] > 0) ++n;
    }
    return n;
  };

  // The chosen set's surplus matches the free-disposal optimum over all
  // subsets, not merely over the menu's candidate sets.
  Tick best_diff = 0;  // empty set
  for (ItemMask set = 0; set < (ItemMask{1} << m); ++set) {
    best_diff = std::max(best_diff, diff_of(set));
  }
  const Tick chosen_diff = diff_of(out.principal_set);
  st.check(chosen_diff == best_diff, "chosen set misses the best surplus");

  // Tie-break chain against every candidate set.
  const Tick chosen_price = menu.price_ticks(out.principal_set);
  const int chosen_dual = dual_buys_of(out.principal_set);
  for (const MenuEntry& cand : menu.candidate_sets()) {
    const ItemMask c = cand.items;
    const Tick price = menu.price_ticks(c);
    if (price == kInfTicks || c == out.principal_set) continue;
    const Tick d = diff_of(c);
    bool ok = chosen_diff > d;
    if (!ok && chosen_diff == d) ok = chosen_price < price;
    if (!ok && chosen_diff == d && chosen_price == price) {
      ok = chosen_dual < dual_buys_of(c) ||
           (chosen_dual == dual_buys_of(c) && lex_less_oracle(out.principal_set, c));
    }
    if (!ok) {
      st.fail("candidate %u beats the chosen set %u", c, out.principal_set);
    }
  }
  ++st.result.checked;

  // Direct-buy rule and the outcome's arithmetic.
  ItemMask u_mask = 0;
  Money seller_paid = 0.0;
  Money kept = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const bool in_t = (out.principal_set >> i) & 1u;
    const bool in_u = (!in_t && v[k] >= q[k]) || q[k] == 0;
    if (in_u) {
      u_mask |= ItemMask{1} << i;
      seller_paid += grid.value(q[k]);
    }
    if (in_t || in_u) kept += grid.value(v[k]);
    const Money want = in_u ? grid.value(q[k]) : 0.0;
    st.check(out.seller_revenues[k] == want, "seller revenue mismatch");
  }
  st.check(out.seller_set == u_mask, "direct-buy set mismatch");
  st.check(out.principal_price == chosen_price, "principal price mismatch");
  st.check_slack(-std::abs(out.buyer_utility -
                           (kept - grid.value(chosen_price) - seller_paid)),
                 1e-9, "buyer utility arithmetic");
}

// ---- monotone: one-switch threshold structure along a price sweep, checked
// tick by tick, plus the choice-locality oracle ----
void run_monotone(SuiteState& st, Rng& rng) {
  const int m = static_cast<int>(rng.range(1, 3));
  const ValueGrid grid = make_grid(0.2, 1.0);
  const Menu menu = random_menu(rng, m, grid.max_tick + 2);

  std::vector<Tick> v(static_cast<std::size_t>(m));
  std::vector<Tick> q(static_cast<std::size_t>(m));
  for (auto& t : v) t = rng.range(0, grid.max_tick);
  for (auto& t : q) t = rng.range(0, grid.max_tick + 1);
  const int i = static_cast<int>(rng.range(0, m - 1));
  const Tick q_max = grid.max_tick + 2;

  try {
    const ThresholdResult th = threshold_structure(menu, q, v, i, q_max, grid);
    bool consistent = true;
    std::vector<Tick> probe = q;
    for (Tick a = 0; a <= q_max; ++a) {
      probe[static_cast<std::size_t>(i)] = a;
      const ItemMask t = buyer_choice(menu, probe, v, grid).principal_set;
      consistent = consistent && t == (a <= th.theta_tick ? th.below : th.above);
    }
    st.check(consistent, "threshold result disagrees with pointwise choices");
  } catch (const NonThresholdBehavior&) {
    ++st.result.checked;
    st.fail("buyer set switched more than once along seller %d's sweep", i);
  }

  // Perturb values on a random subset; the chosen set must be local to it.
  const auto s = static_cast<ItemMask>(rng.range(0, (Tick{1} << m) - 1));
  std::vector<Tick> v2 = v;
  for (int j = 0; j < m; ++j) {
    if ((s >> j) & 1u) v2[static_cast<std::size_t>(j)] = rng.range(0, grid.max_tick);
  }
  st.check(value_change_check(menu, q, v, v2, s, grid), "choice not local to the changed items");
}

// ---- payoffs: factorized payoffs equal full enumeration ----
void run_payoffs(SuiteState& st, Rng& rng) {
  const int m = static_cast<int>(rng.range(1, 3));
  const ValueGrid grid = make_grid(0.25, 1.0);
  const MarketInstance inst = random_instance(rng, m, grid);
  const MenuKind kind = rng.coin(0.5) ? MenuKind::GrandBundle : MenuKind::Partition;
  const Menu menu = random_menu_of_kind(rng, kind, m, 2 * grid.max_tick);
  const StrategyProfile profile = random_profile(rng, inst);

  for (int i = 0; i < m; ++i) {
    const Money a = seller_utility_factorized(inst, menu, profile, i);
    const Money b = seller_utility_enumeration(inst, menu, profile, i);
    st.check_slack(-std::abs(a - b), 1e-12, "factorized seller utility");
  }
  const Money pa = principal_revenue_factorized(inst, menu, profile);
  const Money pb = principal_revenue_enumeration(inst, menu, profile);
  st.check_slack(-std::abs(pa - pb), 1e-12, "factorized principal revenue");
}

// ---- supremum: revenue of ANY profile is capped by the truncated means at
// the supports' tops ----
void run_supremum(SuiteState& st, Rng& rng) {
  const int m = static_cast<int>(rng.range(1, 5));
  const ValueGrid grid = make_grid(0.25, 1.0);
  const MarketInstance inst = random_instance(rng, m, grid);
  const Menu menu = m <= 3 ? random_menu(rng, m, 2 * grid.max_tick)
                           : random_menu_of_kind(
                                 rng, rng.coin(0.5) ? MenuKind::GrandBundle : MenuKind::Partition,
                                 m, 2 * grid.max_tick);
  const StrategyProfile profile = random_profile(rng, inst);
  const Money bound = supremum_bound(inst, profile);
  const Money revenue = principal_revenue(inst, menu, profile);
  st.check_slack(bound - revenue, 1e-12, "supremum revenue bound");
}

// ---- lemmas: the variance/remainder lemma suite on random draws whose
// discount satisfies the hypotheses by construction ----
void run_lemmas(SuiteState& st, Rng& rng) {
  const int m = static_cast<int>(rng.range(1, 3));
  const ValueGrid grid = make_grid(0.05, 1.0);
  const MarketInstance inst = random_instance(rng, m, grid);
  const double k_param = static_cast<double>(Tick{1} << rng.range(0, 2));  // 1, 2, or 4

  double min_f4 = 1.0;
  for (const auto& d : inst.items) {
    const double f = cdf_strict(d, myerson_price(d));
    min_f4 = std::min(min_f4, f * f * f * f);
  }
  const double kk = std::max(k_param, instance_k_ratio(inst));
  const double c = 1.0 - rng.uniform01() * min_f4 / (8.0 * kk + 1.0);

  std::vector<StrategyProfile> profiles;
  profiles.push_back(random_profile(rng, inst));
  std::vector<Tick> lo(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Tick r = myerson_tick(inst.items[static_cast<std::size_t>(i)]);
    lo[static_cast<std::size_t>(i)] =
        static_cast<Tick>(std::ceil(c * static_cast<double>(r) - 1e-9));
  }
  profiles.push_back(random_profile_above(rng, inst, lo));

  for (const LemmaCheck& check : lemma_suite(inst, c, k_param, profiles)) {
    ++st.result.checked;
    if (check.hypothesis_met) st.result.worst_slack = std::min(st.result.worst_slack, check.slack);
    if (!check.pass) st.fail("%s failed: %s", check.lemma.c_str(), check.detail.c_str());
  }
}

// ---- berry_esseen: exact Kolmogorov distance of the normalized sum never
// exceeds the computed bound ----
void run_berry_esseen(SuiteState& st, Rng& rng) {
  const int m = static_cast<int>(rng.range(5, 25));
  const ValueGrid grid = make_grid(0.05, 1.0);
  std::vector<DiscreteDistribution> summands;
  summands.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) summands.push_back(random_distribution(rng, grid));

  const double delta = berry_esseen_delta(summands);
  const double dist = kolmogorov_distance_to_normal(summands);
  st.check_slack(delta - dist, 0.0, "normal-approximation bound");
}

// ---- ceiling: every certified equilibrium respects the truncated-welfare
// revenue ceiling; the price recommendation evaluates cleanly ----
void run_ceiling(SuiteState& st, Rng& rng) {
  const int m = static_cast<int>(rng.range(1, 3));
  const ValueGrid grid = make_grid(0.1, 1.0);
  const MarketInstance inst = random_instance(rng, m, grid);
  const Menu menu = random_menu(rng, m, 2 * grid.max_tick);

  SolverOptions opts;
  opts.seeds = {1, 2};
  opts.dynamics.max_iters = 250;
  const SolveReport report = solve_all(inst, menu, opts);
  const Money welfare = truncated_welfare(inst);
  for (const auto& cert : report.equilibria) {
    st.check_slack(welfare - cert.principal_revenue, 1e-9, "truncated-welfare ceiling");
    st.check(upper_bound_check(inst, cert), "upper bound check rejected a certificate");
  }

  const BenchmarkReport bench = bundle_price_formula(inst);
  st.check(bench.bundle_price >= 0.0 && bench.truncated_welfare >= 0.0,
           "price recommendation produced negative quantities");
}

}  // namespace

PropertyResult run_property_suite(const std::string& suite, std::uint64_t seed, int trials) {
  SuiteState st;
  st.result.suite = suite;
  st.result.trials = trials;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    st.trial = t;
    if (suite == "buyer") {
      run_buyer(st, rng);
    } else if (suite == "monotone") {
      run_monotone(st, rng);
    } else if (suite == "payoffs") {
      run_payoffs(st, rng);
    } else if (suite == "supremum") {
      run_supremum(st, rng);
    } else if (suite == "lemmas") {
      run_lemmas(st, rng);
    } else if (suite == "berry_esseen") {
      run_berry_esseen(st, rng);
    } else if (suite == "ceiling") {
      run_ceiling(st, rng);
    } else {
      throw OffGridValue("unknown property suite: " + suite);
    }
  }
  return st.result;
}

std::vector<std::string> property_suite_names() {
  return {"buyer", "monotone", "payoffs", "supremum", "lemmas", "berry_esseen", "ceiling"};
}

}  // namespace bundleduel
