#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "bundleduel/errors.hpp"

namespace bundleduel {

using Money = double;
using Tick = std::int64_t;

// Sentinel for "no menu entry covers this set"; never arises from arithmetic.
inline constexpr Tick kInfTicks = std::numeric_limits<Tick>::max();

// Uniform money lattice. All values, seller prices, and menu prices live on
// integer multiples of `step`, so set comparisons and tie detection are exact
// integer comparisons; doubles appear only at the API boundary.
struct ValueGrid {
  Money step = 0.0;
  Tick max_tick = 0;

  Money max_value() const { return static_cast<Money>(max_tick) * step; }
  Money value(Tick t) const { return static_cast<Money>(t) * step; }

  // Nearest tick if `v` is within 1e-9 (relative) of a lattice point.
  std::optional<Tick> snap(Money v) const {
    if (!(v >= 0.0) || !std::isfinite(v)) return std::nullopt;
    const double raw = v / step;
    if (raw > 9.0e15) return std::nullopt;
    const Tick t = static_cast<Tick>(std::llround(raw));
    const double back = static_cast<double>(t) * step;
    if (std::fabs(back - v) <= 1e-9 * std::fmax(1.0, std::fabs(v))) return t;
    return std::nullopt;
  }

  // Exact lattice point or OffGridValue. No upper bound: prices may exceed
  // max_value; distribution atoms are range-checked by their constructor.
  Tick to_tick(Money v, const char* what = "value") const {
    auto t = snap(v);
    if (!t) {
      throw OffGridValue(std::string(what) + " " + std::to_string(v) +
                         " is not a multiple of grid step " + std::to_string(step));
    }
    return *t;
  }
};

// step > 0 and max_value an exact multiple of step.
inline ValueGrid make_grid(Money step, Money max_value) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw OffGridValue("grid step must be positive and finite");
  }
  ValueGrid g{step, 0};
  g.max_tick = g.to_tick(max_value, "max_value");
  if (g.max_tick <= 0) throw OffGridValue("max_value must be at least one grid step");
  return g;
}

}  // namespace bundleduel
