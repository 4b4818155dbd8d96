#include "bundleduel/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace bundleduel {

DiscreteDistribution make_distribution_ticks(const ValueGrid& grid, std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (a.tick < 0 || a.tick > grid.max_tick) {
      throw OffGridValue("atom value " + std::to_string(grid.value(a.tick)) +
                         " outside [0, max_value]");
    }
    if (!(a.prob >= 0.0) || !std::isfinite(a.prob)) {
      throw ProbSumMismatch("atom probability must be finite and non-negative");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.tick < r.tick; });

  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().tick == a.tick) {
      merged.back().prob += a.prob;
    } else {
      merged.push_back(a);
    }
  }

  double total = 0.0;
  for (const Atom& a : merged) total += a.prob;
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ProbSumMismatch("probabilities sum to " + std::to_string(total) + ", expected 1");
  }

  std::vector<Atom> kept;
  kept.reserve(merged.size());
  for (Atom& a : merged) {
    if (a.prob > 0.0) {
      a.prob /= total;
      kept.push_back(a);
    }
  }
  if (kept.empty() || (kept.size() == 1 && kept[0].tick == 0)) {
    throw TrivialDistribution("all probability mass at value 0");
  }
  return DiscreteDistribution(grid, std::move(kept));
}

DiscreteDistribution make_distribution(const ValueGrid& grid,
                                       std::span<const std::pair<Money, double>> atoms) {
  std::vector<Atom> ticked;
  ticked.reserve(atoms.size());
  for (const auto& [value, prob] : atoms) {
    ticked.push_back(Atom{grid.to_tick(value, "atom value"), prob});
  }
  return make_distribution_ticks(grid, std::move(ticked));
}

DiscreteDistribution binary_distribution(const ValueGrid& grid, Money high, double x) {
  std::vector<Atom> atoms;
  if (x < 1.0) atoms.push_back(Atom{0, 1.0 - x});
  atoms.push_back(Atom{grid.to_tick(high, "high value"), x});
  return make_distribution_ticks(grid, std::move(atoms));
}

namespace {

// Threshold tick semantics for an arbitrary real bound x: an atom at tick t
// is "< x" iff t < strict_lower_tick(x). Reals within 1e-9 of a lattice
// point are treated as that lattice point.
Tick strict_lower_tick(const ValueGrid& grid, Money x) {
  if (auto t = grid.snap(x)) return *t;
  return static_cast<Tick>(std::ceil(x / grid.step));
}

}  // namespace

double cdf_strict(const DiscreteDistribution& d, Money x) {
  if (!(x > 0.0)) return 0.0;
  const Tick bound = strict_lower_tick(d.grid(), x);
  double below = 0.0;
  for (const Atom& a : d.atoms()) {
    if (a.tick < bound) below += a.prob;
  }
  return below;
}

double prob_at_least(const DiscreteDistribution& d, Money x) {
  if (!(x > 0.0)) return 1.0;
  const Tick bound = strict_lower_tick(d.grid(), x);
  double mass = 0.0;
  for (const Atom& a : d.atoms()) {
    if (a.tick >= bound) mass += a.prob;
  }
  return mass;
}

Money revenue_at(const DiscreteDistribution& d, Money x) { return x * prob_at_least(d, x); }

Tick myerson_tick(const DiscreteDistribution& d) {
  // Only support points can maximize x * Pr[v >= x]; scan ascending with a
  // running tail mass, taking the largest maximizer.
  double tail = 1.0;
  double best = -1.0;
  Tick best_tick = 0;
  for (const Atom& a : d.atoms()) {
    const double rev = d.grid().value(a.tick) * tail;
    if (rev >= best) {
      best = rev;
      best_tick = a.tick;
    }
    tail -= a.prob;
  }
  return best_tick;
}

Money myerson_price(const DiscreteDistribution& d) { return d.grid().value(myerson_tick(d)); }

double mean(const DiscreteDistribution& d) {
  double m = 0.0;
  for (const Atom& a : d.atoms()) m += a.prob * d.grid().value(a.tick);
  return m;
}

double truncated_mean(const DiscreteDistribution& d, Money t) {
  double m = 0.0;
  for (const Atom& a : d.atoms()) m += a.prob * std::fmin(d.grid().value(a.tick), t);
  return m;
}

double truncated_variance(const DiscreteDistribution& d, Money t) {
  const double mu = truncated_mean(d, t);
  double var = 0.0;
  for (const Atom& a : d.atoms()) {
    const double dev = std::fmin(d.grid().value(a.tick), t) - mu;
    var += a.prob * dev * dev;
  }
  return var;
}

double truncated_abs3(const DiscreteDistribution& d, Money t) {
  const double mu = truncated_mean(d, t);
  double rho = 0.0;
  for (const Atom& a : d.atoms()) {
    const double dev = std::fabs(std::fmin(d.grid().value(a.tick), t) - mu);
    rho += a.prob * dev * dev * dev;
  }
  return rho;
}

DiscreteDistribution truncate(const DiscreteDistribution& d, Money t) {
  const Tick cap = d.grid().to_tick(t, "truncation point");
  std::vector<Atom> atoms;
  atoms.reserve(d.atoms().size());
  for (const Atom& a : d.atoms()) {
    atoms.push_back(Atom{std::min(a.tick, cap), a.prob});
  }
  return make_distribution_ticks(d.grid(), std::move(atoms));
}

}  // namespace bundleduel
