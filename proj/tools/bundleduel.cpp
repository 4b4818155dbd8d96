// Command-line front end: instance/menu ingestion, experiment orchestration,
// deterministic seeding, and report/plot-data emission.
//
// Exit codes: 0 success, 2 check failure, 3 input error, 4 budget exceeded.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bundleduel/counterexample.hpp"
#include "bundleduel/errors.hpp"
#include "bundleduel/generators.hpp"
#include "bundleduel/io.hpp"
#include "bundleduel/lemma_checks.hpp"
#include "bundleduel/properties.hpp"
#include "bundleduel/theory.hpp"

namespace bd = bundleduel;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 2;
constexpr int kExitInputError = 3;
constexpr int kExitBudget = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  std::int64_t seed = -1;  // -1: not given
  std::string suite;       // proptest only
  int trials = 100;        // proptest only
};

Json json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bd::ExperimentConfig load_config(const CommonArgs& args) {
  if (args.config_path.empty()) return {};
  return bd::read_config(args.config_path);
}

// Precedence: --out flag, then BUNDLEDUEL_OUT, then config, then cwd.
std::filesystem::path resolve_out_dir(const CommonArgs& args, const bd::ExperimentConfig& cfg) {
  std::string dir = args.out_override;
  if (dir.empty()) {
    if (const char* env = std::getenv("BUNDLEDUEL_OUT")) dir = env;
  }
  if (dir.empty()) dir = cfg.get("output.dir", ".");
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content) {
  bd::write_text_file((dir / name).string(), content);
  std::printf("wrote %s\n", (dir / name).string().c_str());
}

bd::MarketInstance load_instance(const bd::ExperimentConfig& cfg, std::uint64_t seed) {
  const std::string items = cfg.get("instance.items");
  if (!items.empty()) {
    std::vector<bd::DiscreteDistribution> dists;
    for (const std::string& path : split_list(items)) {
      dists.push_back(bd::read_distribution(path));
    }
    if (dists.empty()) throw bd::ParseError("instance.items names no files", 0);
    return bd::make_instance(dists.front().grid(), std::move(dists));
  }
  if (cfg.get("instance.generator") == "random") {
    const auto m = static_cast<int>(cfg.get_int("instance.m", 2));
    const bd::ValueGrid grid = bd::make_grid(cfg.get_double("instance.grid_step", 0.05),
                                             cfg.get_double("instance.grid_max", 1.0));
    bd::DistributionGenOptions gen;
    gen.min_atoms = static_cast<int>(cfg.get_int("instance.atoms_min", gen.min_atoms));
    gen.max_atoms = static_cast<int>(cfg.get_int("instance.atoms_max", gen.max_atoms));
    bd::Rng rng(seed);
    return bd::random_instance(rng, m, grid, gen);
  }
  throw bd::ParseError("config needs instance.items or instance.generator=random", 0);
}

bd::Menu load_menu(const bd::ExperimentConfig& cfg, const bd::MarketInstance& inst) {
  const std::string path = cfg.get("menu.path");
  if (!path.empty()) return bd::read_menu(path, inst.item_count(), inst.grid);
  const std::string line = cfg.get("menu.line");
  if (!line.empty()) return bd::parse_menu(line, inst.item_count(), inst.grid, "menu.line");
  if (cfg.has("menu.price")) {
    return bd::Menu::grand_bundle(inst.item_count(),
                                  inst.grid.to_tick(cfg.get_double("menu.price", 0.0)));
  }
  throw bd::ParseError("config needs menu.path, menu.line, or menu.price", 0);
}

bd::SolverOptions solver_options(const bd::ExperimentConfig& cfg, std::int64_t seed_override) {
  bd::SolverOptions opts;
  const std::string seeds = cfg.get("solver.seeds");
  if (!seeds.empty()) {
    opts.seeds.clear();
    for (const std::string& s : split_list(seeds)) {
      opts.seeds.push_back(static_cast<std::uint64_t>(std::stoll(s)));
    }
  }
  if (seed_override >= 0) opts.seeds = {static_cast<std::uint64_t>(seed_override)};
  opts.dynamics.max_iters = static_cast<int>(cfg.get_int("solver.max_iters", 2000));
  opts.dynamics.tol = cfg.get_double("solver.tol", 1e-9);
  opts.dynamics.check_every = static_cast<int>(cfg.get_int("solver.check_every", 32));
  opts.pure_budget =
      static_cast<std::uint64_t>(cfg.get_int("solver.pure_budget", bd::kDefaultPureBudget));
  opts.dominance_budget = static_cast<std::uint64_t>(
      cfg.get_int("solver.dominance_budget", bd::kDefaultDominanceBudget));
  return opts;
}

// ---- analyze: per-item pricing statistics and the bundle-price checklist ----
int cmd_analyze(const CommonArgs& args) {
  const bd::ExperimentConfig cfg = load_config(args);
  const auto out_dir = resolve_out_dir(args, cfg);
  const std::uint64_t seed = args.seed >= 0 ? static_cast<std::uint64_t>(args.seed) : 1;
  const bd::MarketInstance inst = load_instance(cfg, seed);
  const bd::BenchmarkReport report = bd::bundle_price_formula(inst);

  Json doc;
  doc["schema"] = 1;
  doc["kind"] = "analysis";
  Json items = Json::array();
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const auto& d = inst.items[i];
    const bd::Money r = bd::myerson_price(d);
    Json row;
    row["item"] = i + 1;
    row["myerson_price"] = r;
    row["revenue_at_r"] = bd::revenue_at(d, r);
    row["truncated_mean_at_r"] = bd::truncated_mean(d, r);
    row["truncated_sd_at_r"] = std::sqrt(bd::truncated_variance(d, r));
    row["strict_cdf_at_r"] = report.strict_cdf_at_r[i];
    row["lambda"] = report.lambda_per_item[i];
    items.push_back(std::move(row));
  }
  doc["items"] = std::move(items);
  doc["K"] = json_num(report.K);
  doc["C"] = json_num(report.C);
  doc["sigma_truncated"] = json_num(report.sigma_truncated);
  doc["truncated_welfare"] = json_num(report.truncated_welfare);
  doc["bundle_price"] = json_num(report.bundle_price);
  doc["hypothesis_ok"] = report.hypothesis_ok;
  if (!report.hypothesis_ok) {
    doc["reason"] = !report.breakdown.lambda_positive ? "lambda=0" : "sigma below threshold";
  }
  write_file(out_dir, "analysis.json", doc.dump(2) + "\n");
  write_file(out_dir, "benchmark_report.json", bd::benchmark_report_json(report));
  std::printf("hypothesis_ok=%s bundle_price=%.6g\n", report.hypothesis_ok ? "true" : "false",
              report.bundle_price);
  return kExitOk;
}

// ---- solve: dominance -> pure search -> dynamics; certificates + summary ----
int cmd_solve(const CommonArgs& args) {
  const bd::ExperimentConfig cfg = load_config(args);
  const auto out_dir = resolve_out_dir(args, cfg);
  const std::uint64_t gen_seed = args.seed >= 0 ? static_cast<std::uint64_t>(args.seed) : 1;
  const bd::MarketInstance inst = load_instance(cfg, gen_seed);
  const bd::Menu menu = load_menu(cfg, inst);
  const bd::SolverOptions opts = solver_options(cfg, args.seed);

  const bd::SolveReport report = bd::solve_all(inst, menu, opts);

  bool ceiling_ok = true;
  bd::Money min_rev = 0.0;
  bd::Money max_rev = 0.0;
  for (std::size_t i = 0; i < report.equilibria.size(); ++i) {
    const auto& cert = report.equilibria[i];
    ceiling_ok = ceiling_ok && bd::upper_bound_check(inst, cert);
    min_rev = i == 0 ? cert.principal_revenue : std::min(min_rev, cert.principal_revenue);
    max_rev = std::max(max_rev, cert.principal_revenue);
    char name[32];
    std::snprintf(name, sizeof name, "cert_%03zu.json", i + 1);
    write_file(out_dir, name, bd::certificate_json(cert, menu, inst.grid));
  }

  Json doc;
  doc["schema"] = 1;
  doc["kind"] = "solve_summary";
  doc["n_equilibria"] = report.equilibria.size();
  doc["n_unconverged"] = report.unconverged.size();
  doc["min_revenue"] = json_num(min_rev);
  doc["max_revenue"] = json_num(max_rev);
  doc["min_over_found_only"] = true;  // equilibria outside the search are not ruled out
  doc["truncated_welfare"] = json_num(bd::truncated_welfare(inst));
  doc["revenue_ceiling_ok"] = ceiling_ok;
  doc["pure_search_ran"] = report.pure_search_ran;
  doc["budget_hit"] = report.budget_hit;
  doc["dominance"] = {{"rounds", report.dominance.rounds},
                      {"completed", report.dominance.completed},
                      {"eliminations", report.dominance.eliminated.size()}};
  write_file(out_dir, "solve_summary.json", doc.dump(2) + "\n");
  std::printf("equilibria=%zu unconverged=%zu revenue=[%.6g, %.6g]\n", report.equilibria.size(),
              report.unconverged.size(), min_rev, max_rev);
  if (!ceiling_ok) {
    std::fprintf(stderr, "revenue ceiling violated by a certified equilibrium\n");
    return kExitCheckFailure;
  }
  return kExitOk;
}

// ---- sweep: grand-bundle price sweep over the doubly-exponential family ----
int cmd_sweep(const CommonArgs& args) {
  const bd::ExperimentConfig cfg = load_config(args);
  const auto out_dir = resolve_out_dir(args, cfg);
  const auto k = cfg.get_int("sweep.k", 3);
  const auto n = static_cast<int>(cfg.get_int("sweep.n", 2));
  const bd::CounterexampleInstance ce = bd::build_counterexample(k, n);
  const bd::ValueGrid& grid = ce.instance.grid;

  std::vector<bd::Tick> ticks;
  const std::string prices = cfg.get("sweep.prices");
  if (!prices.empty()) {
    for (const std::string& s : split_list(prices)) ticks.push_back(grid.to_tick(std::stod(s)));
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  } else {
    const double hi = cfg.get_double("sweep.hi", 3.0 * static_cast<double>(ce.spec.H.back()));
    const double lo = cfg.get_double("sweep.lo", grid.step);
    int count = static_cast<int>(cfg.get_int("sweep.count", 0));
    if (count <= 0) {
      const double per_decade = cfg.get_double("sweep.prices_per_decade", 40.0);
      count = std::max(1, static_cast<int>(std::ceil(per_decade * std::log10(hi / lo))));
    }
    ticks = bd::log_spaced_ticks(lo, hi, count, grid);
  }

  bd::SweepOptions opts;
  const std::string seeds = cfg.get("solver.seeds");
  if (!seeds.empty()) {
    opts.seeds.clear();
    for (const std::string& s : split_list(seeds)) {
      opts.seeds.push_back(static_cast<std::uint64_t>(std::stoll(s)));
    }
  }
  if (args.seed >= 0) opts.seeds = {static_cast<std::uint64_t>(args.seed)};
  opts.max_iters = static_cast<int>(cfg.get_int("solver.max_iters", opts.max_iters));
  opts.tol = cfg.get_double("solver.tol", opts.tol);
  opts.pure_budget =
      static_cast<std::uint64_t>(cfg.get_int("solver.pure_budget", bd::kDefaultPureBudget));

  const std::vector<bd::SweepRow> rows = bd::grand_bundle_sweep(ce.instance, ce.spec, ticks, opts);
  write_file(out_dir, "sweep.csv", bd::sweep_csv(rows));
  write_file(out_dir, "sweep_plot.dat", bd::sweep_plot_data(rows));

  int violations = 0;
  for (const auto& row : rows) violations += row.bound_ok ? 0 : 1;
  std::printf("prices=%zu bound_violations=%d\n", rows.size(), violations);
  return violations == 0 ? kExitOk : kExitCheckFailure;
}

// ---- proptest: the shared property suites ----
int cmd_proptest(const CommonArgs& args) {
  const bd::ExperimentConfig cfg = load_config(args);
  const auto out_dir = resolve_out_dir(args, cfg);
  const std::uint64_t seed = args.seed >= 0 ? static_cast<std::uint64_t>(args.seed) : 1;

  std::vector<std::string> suites;
  if (!args.suite.empty()) {
    suites.push_back(args.suite);
  } else {
    suites = bd::property_suite_names();
  }

  Json doc;
  doc["schema"] = 1;
  doc["kind"] = "property_report";
  doc["seed"] = seed;
  doc["trials"] = args.trials;
  Json results = Json::array();
  bool all_pass = true;
  for (const std::string& name : suites) {
    const bd::PropertyResult res = bd::run_property_suite(name, seed, args.trials);
    all_pass = all_pass && res.passed();
    Json row;
    row["suite"] = res.suite;
    row["trials"] = res.trials;
    row["checked"] = res.checked;
    row["worst_slack"] = json_num(res.worst_slack);
    row["failures"] = res.failures;
    results.push_back(std::move(row));
    std::printf("suite %-12s trials=%d checks=%d %s\n", name.c_str(), res.trials, res.checked,
                res.passed() ? "PASS" : "FAIL");
    for (const std::string& f : res.failures) std::printf("  %s\n", f.c_str());
  }
  doc["all_pass"] = all_pass;
  doc["results"] = std::move(results);
  write_file(out_dir, "proptest.json", doc.dump(2) + "\n");
  return all_pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bundle-pricing market laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "experiment config file");
    sub->add_option("--seed", args.seed, "seed override");
    sub->add_option("--out", args.out_override, "output directory");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "per-item and instance pricing statistics");
  CLI::App* solve = app.add_subcommand("solve", "find and certify pricing equilibria");
  CLI::App* sweep = app.add_subcommand("sweep", "grand-bundle price sweep with revenue bands");
  CLI::App* prop = app.add_subcommand("proptest", "run a property suite");
  for (CLI::App* sub : {analyze, solve, sweep, prop}) add_common(sub);
  prop->add_option("suite", args.suite, "suite name (default: all)");
  prop->add_option("--trials", args.trials, "trials per suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(args);
    if (solve->parsed()) return cmd_solve(args);
    if (sweep->parsed()) return cmd_sweep(args);
    return cmd_proptest(args);
  } catch (const bd::BudgetExceeded& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return kExitBudget;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
}
