#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace bundleduel {

// SplitMix64: tiny, seedable, identical output on every platform. The test
// suites and the CLI promise byte-identical reruns, so no std:: distribution
// machinery (whose streams are implementation-defined) is used anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n > 0. Modulo bias is irrelevant at test scales.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive bounds
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double uniform01() {  // [0, 1) with 53 random bits
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool coin(double p) { return uniform01() < p; }

  // k distinct values from {lo, ..., hi}, ascending. Requires k <= hi-lo+1.
  std::vector<std::int64_t> distinct(std::int64_t lo, std::int64_t hi, int k) {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<size_t>(k));
    while (static_cast<int>(out.size()) < k) {
      std::int64_t v = range(lo, hi);
      bool dup = false;
      for (std::int64_t u : out) dup = dup || (u == v);
      if (!dup) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bundleduel
