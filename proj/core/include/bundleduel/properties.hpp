#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bundleduel {

// Shared property suites: the CLI `proptest` command and the test binaries
// run the same code. Each suite draws its own instances from the seed.
struct PropertyResult {
  std::string suite;
  int trials = 0;
  int checked = 0;              // individual assertions evaluated
  std::vector<std::string> failures;
  double worst_slack = 0.0;     // most negative slack seen (0 when none apply)
  bool passed() const { return failures.empty(); }
};

// suite in {buyer, monotone, payoffs, supremum, lemmas, berry_esseen, ceiling}.
PropertyResult run_property_suite(const std::string& suite, std::uint64_t seed, int trials);

std::vector<std::string> property_suite_names();

}  // namespace bundleduel
