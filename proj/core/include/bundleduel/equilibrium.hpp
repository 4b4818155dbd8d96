#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bundleduel/payoff.hpp"

namespace bundleduel {

enum class SolveMethod { PureBruteForce, IteratedBR, FictitiousPlay, Verified };

const char* to_string(SolveMethod m);

// epsilon-Nash evidence: regret_i is the best pure-deviation gain over the
// full price grid; epsilon = max_i regret_i (0 means exact on the grid).
struct EquilibriumCertificate {
  StrategyProfile profile;
  std::vector<Money> per_seller_regret;
  Money epsilon = 0.0;
  Money principal_revenue = 0.0;
  SolveMethod method = SolveMethod::Verified;
  std::uint64_t seed = 0;
  bool lex_tiebreak_used = false;  // level-3 buyer tie-break reachable under this profile
  int iterations = 0;              // dynamics only
};

struct BestResponse {
  std::vector<Tick> maximizers;  // ascending; all grid argmaxes
  Money value = 0.0;
  Tick highest() const { return maximizers.back(); }
};

// All pure best responses of seller i against profile's other strategies.
BestResponse best_response(const MarketInstance& inst, const Menu& menu,
                           const StrategyProfile& profile, int i);

// Iterated strict dominance. Round 0 clips every grid to [0, r_i]; later
// rounds eliminate pure prices strictly dominated by another pure price
// against every surviving opponent pure profile, to a fixpoint. Rounds past
// the clip run only while the opponent-profile product stays within budget
// (completed reports whether the fixpoint was certified).
struct DominanceElimination {
  int round;
  int seller;
  Tick price;
  Tick dominator;
};

struct DominanceResult {
  std::vector<std::vector<Tick>> surviving;  // per seller, ascending
  std::vector<DominanceElimination> eliminated;
  int rounds = 0;
  bool completed = false;
};

inline constexpr std::uint64_t kDefaultDominanceBudget = 30'000'000;
DominanceResult iterated_dominance(const MarketInstance& inst, const Menu& menu,
                                   std::uint64_t budget = kDefaultDominanceBudget);

// All pure profiles with exactly zero regret, searched over the given grids
// (defaults to the full clipped grids). Throws BudgetExceeded when the
// profile product exceeds the budget.
inline constexpr std::uint64_t kDefaultPureBudget = 5'000'000;
std::vector<EquilibriumCertificate> find_pure_equilibria(
    const MarketInstance& inst, const Menu& menu,
    const std::vector<std::vector<Tick>>& grids = {},
    std::uint64_t budget = kDefaultPureBudget);

struct DynamicsOptions {
  int max_iters = 2000;
  Money tol = 1e-9;
  int check_every = 32;
  std::vector<std::vector<Tick>> grids;  // empty: full clipped grids
};

// Fictitious play over empirical frequencies, seeded start, simultaneous
// best responses (ties to the highest price). Convergence is never assumed:
// the certificate carries the measured regret of the returned profile. When
// the joint pure best response goes stationary and verifies as an exact
// equilibrium, that pure profile is returned instead of the mixture.
EquilibriumCertificate fictitious_play(const MarketInstance& inst, const Menu& menu,
                                       std::uint64_t seed, const DynamicsOptions& opts = {});

// Plain best-response iteration on pure profiles (cheap pure-NE finder).
EquilibriumCertificate iterated_best_response(const MarketInstance& inst, const Menu& menu,
                                              std::uint64_t seed,
                                              const DynamicsOptions& opts = {});

// Full-grid regret audit of an arbitrary profile; method Verified.
EquilibriumCertificate verify_equilibrium(const MarketInstance& inst, const Menu& menu,
                                          const StrategyProfile& profile, Money tol = 1e-9);

// Partition menus induce independent per-block sub-games (plus singleton
// monopoly sub-games for uncovered items, modeled as an unbuyable bundle).
struct SubGame {
  MarketInstance instance;
  Menu menu;
  std::vector<int> items;  // sub index -> original item index
};

std::vector<SubGame> partition_decompose(const MarketInstance& inst, const Menu& menu);

// Concatenates per-block profiles back to a whole-game profile.
StrategyProfile compose_profiles(const MarketInstance& inst,
                                 const std::vector<SubGame>& subgames,
                                 const std::vector<StrategyProfile>& block_profiles);

// Exact mixed-equilibrium support enumeration for 2-seller games with
// support sizes <= 3 per seller (budget-capped pair enumeration).
std::vector<EquilibriumCertificate> enumerate_mixed_2seller(
    const MarketInstance& inst, const Menu& menu,
    const std::vector<std::vector<Tick>>& grids = {}, int max_support = 3,
    std::uint64_t budget = 2'000'000);

struct SolverOptions {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  DynamicsOptions dynamics;
  std::uint64_t dominance_budget = kDefaultDominanceBudget;
  std::uint64_t pure_budget = kDefaultPureBudget;
  bool run_fictitious_play = true;
  bool run_iterated_br = true;
};

// Pipeline: dominance -> pure brute force on surviving grids (budget
// permitting) -> best-response iteration and fictitious play from each seed.
// Returns certified equilibria (epsilon <= tol after a full-grid audit),
// deduplicated, sorted by revenue then profile. budget_hit reports whether
// any stage was skipped for budget reasons.
struct SolveReport {
  std::vector<EquilibriumCertificate> equilibria;
  DominanceResult dominance;
  bool pure_search_ran = false;
  bool budget_hit = false;
  std::vector<EquilibriumCertificate> unconverged;  // dynamics endpoints with epsilon > tol
};

SolveReport solve_all(const MarketInstance& inst, const Menu& menu, const SolverOptions& opts = {});

}  // namespace bundleduel
