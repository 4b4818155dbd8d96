#pragma once

#include <vector>

#include "bundleduel/instance.hpp"

namespace bundleduel {

// Mixed pricing strategy: support ticks ascending and distinct, probabilities
// positive and summing to 1.
struct MixedStrategy {
  std::vector<Tick> ticks;
  std::vector<double> probs;

  Tick support_min() const { return ticks.front(); }
  Tick support_max() const { return ticks.back(); }
  bool is_pure() const { return ticks.size() == 1; }
};

using StrategyProfile = std::vector<MixedStrategy>;

MixedStrategy pure_strategy(Tick price);

// Sorts/merges atoms, normalizes probabilities (sum must be 1 within 1e-12),
// drops zero-mass entries. Throws ProbSumMismatch.
MixedStrategy make_strategy(std::vector<Tick> ticks, std::vector<double> probs);

// Checks one strategy per seller, supports on the price lattice (multiples
// of step_ticks) and non-negative. Supports above ub_ticks are allowed: the
// game is defined there, merely dominated. Throws OffGridValue/ProbSumMismatch.
void validate_profile(const MarketInstance& inst, const StrategyProfile& profile);

}  // namespace bundleduel
