#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bundleduel/grid.hpp"

namespace bundleduel {

struct Atom {
  Tick tick;
  double prob;
};

// Finite pmf on a ValueGrid: atoms sorted ascending, distinct ticks, positive
// probabilities summing to 1, not all mass at zero. Immutable once built.
class DiscreteDistribution {
 public:
  DiscreteDistribution(ValueGrid grid, std::vector<Atom> atoms)
      : grid_(grid), atoms_(std::move(atoms)) {}

  const ValueGrid& grid() const { return grid_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  Tick max_support_tick() const { return atoms_.back().tick; }
  Money max_support() const { return grid_.value(atoms_.back().tick); }

 private:
  ValueGrid grid_;
  std::vector<Atom> atoms_;
};

// Validates, sorts, merges duplicate values, normalizes, drops zero-mass
// atoms. Throws OffGridValue, ProbSumMismatch, TrivialDistribution.
DiscreteDistribution make_distribution(const ValueGrid& grid,
                                       std::span<const std::pair<Money, double>> atoms);
DiscreteDistribution make_distribution_ticks(const ValueGrid& grid, std::vector<Atom> atoms);

// Convenience: two-point distribution {0 w.p. 1-x, high w.p. x}.
DiscreteDistribution binary_distribution(const ValueGrid& grid, Money high, double x);

// Pr[v < x] (strict). Off-grid x is compared against exact lattice values.
double cdf_strict(const DiscreteDistribution& d, Money x);

// Pr[v >= x].
double prob_at_least(const DiscreteDistribution& d, Money x);

// x * Pr[v >= x].
Money revenue_at(const DiscreteDistribution& d, Money x);

// Largest revenue-maximizing support value; ties go to the largest price.
Tick myerson_tick(const DiscreteDistribution& d);
Money myerson_price(const DiscreteDistribution& d);

// Moments of min(v, t) for arbitrary real t >= 0; exact single passes over
// the atoms in ascending order (bit-for-bit reproducible).
double mean(const DiscreteDistribution& d);
double truncated_mean(const DiscreteDistribution& d, Money t);
double truncated_variance(const DiscreteDistribution& d, Money t);
double truncated_abs3(const DiscreteDistribution& d, Money t);

// Distribution of min(v, t); t must be on the grid.
DiscreteDistribution truncate(const DiscreteDistribution& d, Money t);

}  // namespace bundleduel
