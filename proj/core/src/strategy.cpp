#include "bundleduel/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bundleduel/errors.hpp"

namespace bundleduel {

MixedStrategy pure_strategy(Tick price) {
  if (price < 0) throw OffGridValue("prices must be nonnegative");
  MixedStrategy s;
  s.ticks.push_back(price);
  s.probs.push_back(1.0);
  return s;
}

MixedStrategy make_strategy(std::vector<Tick> ticks, std::vector<double> probs) {
  if (ticks.size() != probs.size() || ticks.empty()) {
    throw ProbSumMismatch("strategy needs matching, nonempty tick/probability lists");
  }
  std::vector<std::size_t> order(ticks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ticks[a] < ticks[b]; });

  MixedStrategy s;
  double total = 0.0;
  for (const std::size_t k : order) {
    if (ticks[k] < 0) throw OffGridValue("prices must be nonnegative");
    const double p = probs[k];
    if (!(p >= 0.0) || !std::isfinite(p)) throw ProbSumMismatch("probabilities must be finite and >= 0");
    total += p;
    if (p == 0.0) continue;
    if (!s.ticks.empty() && s.ticks.back() == ticks[k]) {
      s.probs.back() += p;
    } else {
      s.ticks.push_back(ticks[k]);
      s.probs.push_back(p);
    }
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ProbSumMismatch("strategy probabilities must sum to 1");
  if (s.ticks.empty()) throw ProbSumMismatch("strategy has no positive-probability price");
  for (double& p : s.probs) p /= total;
  return s;
}

void validate_profile(const MarketInstance& inst, const StrategyProfile& profile) {
  if (static_cast<int>(profile.size()) != inst.item_count()) {
    throw OffGridValue("profile must contain one strategy per item seller");
  }
  for (const auto& s : profile) {
    if (s.ticks.size() != s.probs.size() || s.ticks.empty()) {
      throw ProbSumMismatch("strategy needs matching, nonempty tick/probability lists");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < s.ticks.size(); ++k) {
      if (s.ticks[k] < 0) throw OffGridValue("prices must be nonnegative");
      if (s.ticks[k] % inst.prices.step_ticks != 0) {
        throw OffGridValue("strategy support must lie on the price lattice");
      }
      if (k > 0 && s.ticks[k] <= s.ticks[k - 1]) {
        throw OffGridValue("strategy support must be ascending and distinct");
      }
      if (!(s.probs[k] > 0.0) || !std::isfinite(s.probs[k])) {
        throw ProbSumMismatch("strategy probabilities must be positive and finite");
      }
      total += s.probs[k];
    }
    if (std::fabs(total - 1.0) > 1e-9) throw ProbSumMismatch("strategy probabilities must sum to 1");
  }
}

}  // namespace bundleduel
