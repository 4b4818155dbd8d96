#pragma once

#include <map>
#include <string>
#include <vector>

#include "bundleduel/counterexample.hpp"
#include "bundleduel/lemma_checks.hpp"

namespace bundleduel {

// ---- distribution files ----
// Header line `# grid_step=<step> max_value=<max>` followed by
// `value<TAB>prob` lines. Plain decimal input; written output round-trips.
DiscreteDistribution read_distribution(const std::string& path);
DiscreteDistribution parse_distribution(const std::string& text, const std::string& origin);
std::string format_distribution(const DiscreteDistribution& d);
void write_distribution(const DiscreteDistribution& d, const std::string& path);

// ---- menu files ----
// One of:  `grand <price>`
//          `partition {1,2}=<price> {3}=<price> ...`
//          `explicit {1}=<price> {1,2}=<price> ...`
// Item indices are 1-based. Prices must sit on the value grid.
Menu read_menu(const std::string& path, int item_count, const ValueGrid& grid);
Menu parse_menu(const std::string& text, int item_count, const ValueGrid& grid,
                const std::string& origin);
std::string format_menu(const Menu& menu, const ValueGrid& grid);

// ---- config files ----
// Flat `key = value` lines under [section] headers; `#` comments. Keys are
// stored as "section.key".
struct ExperimentConfig {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
};

ExperimentConfig read_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

// ---- reports ----
// All JSON documents carry {"schema": 1, "kind": ...}; doubles serialize
// shortest-round-trip so byte-identical reruns hold.
std::string certificate_json(const EquilibriumCertificate& cert, const Menu& menu,
                             const ValueGrid& grid);
std::string benchmark_report_json(const BenchmarkReport& report);
std::string lemma_checks_json(const std::vector<LemmaCheck>& checks);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_plot_data(const std::vector<SweepRow>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace bundleduel
