#pragma once

#include <span>
#include <vector>

#include "bundleduel/strategy.hpp"

namespace bundleduel {

// Dense pmf over ticks 0..size-1 with an explicit nonzero-tick list so
// convolutions cost nnz(a) * nnz(b) regardless of the dense range.
struct Pmf {
  std::vector<double> mass;
  std::vector<Tick> nz;  // ascending ticks with mass > 0

  Tick max_tick() const { return nz.empty() ? 0 : nz.back(); }
  double at(Tick t) const {
    return (t >= 0 && t < static_cast<Tick>(mass.size())) ? mass[static_cast<size_t>(t)] : 0.0;
  }
};

Pmf pmf_point(Tick t);
Pmf pmf_from_dense(std::vector<double> mass);

// Law of V = min(v, q) with v ~ d and q ~ s (q fixed for the pure overload).
Pmf min_value_law(const DiscreteDistribution& d, const MixedStrategy& s);
Pmf min_value_law_pure(const DiscreteDistribution& d, Tick q);

// Sum-law convolution; throws GridOverflow past max_ticks_cap.
inline constexpr Tick kDefaultConvCap = Tick{1} << 24;
Pmf convolve(const Pmf& a, const Pmf& b, Tick max_ticks_cap = kDefaultConvCap);

// Exact pmf of sum_{j != i} X_j for every i via prefix/suffix products
// (m-1 convolutions per direction plus m combining passes).
std::vector<Pmf> loo_convolutions(std::span<const Pmf> laws, Tick max_ticks_cap = kDefaultConvCap);

Pmf full_convolution(std::span<const Pmf> laws, Tick max_ticks_cap = kDefaultConvCap);

// Cumulative view: at_most(t) = Pr[X <= t], greater(t) = Pr[X > t].
struct Cdf {
  std::vector<double> cum;  // cum[t] = Pr[X <= t]
  double at_most(Tick t) const {
    if (t < 0) return 0.0;
    if (t >= static_cast<Tick>(cum.size())) return cum.empty() ? 0.0 : cum.back();
    return cum[static_cast<size_t>(t)];
  }
  double greater(Tick t) const { return 1.0 - at_most(t); }
};

Cdf make_cdf(const Pmf& p);

double pmf_mean(const Pmf& p);
double pmf_variance(const Pmf& p);

}  // namespace bundleduel
