#pragma once

#include <stdexcept>
#include <string>

namespace bundleduel {

// Every library failure mode is a distinct exception type so callers can map
// them onto exit codes without string matching.
struct OffGridValue final : std::runtime_error {
  explicit OffGridValue(const std::string& what) : std::runtime_error(what) {}
};

struct ProbSumMismatch final : std::runtime_error {
  explicit ProbSumMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct TrivialDistribution final : std::runtime_error {
  explicit TrivialDistribution(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedFamily final : std::runtime_error {
  explicit UnsupportedFamily(const std::string& what) : std::runtime_error(what) {}
};

struct GridOverflow final : std::runtime_error {
  explicit GridOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedMenuAtScale final : std::runtime_error {
  explicit UnsupportedMenuAtScale(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded final : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a buyer-set sweep over one seller's price shows more than one
// switch; the threshold claim guarantees this cannot happen, so seeing it
// means the buyer oracle itself is broken.
struct NonThresholdBehavior final : std::runtime_error {
  explicit NonThresholdBehavior(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroVarianceSummand final : std::runtime_error {
  explicit ZeroVarianceSummand(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError final : std::runtime_error {
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

}  // namespace bundleduel
