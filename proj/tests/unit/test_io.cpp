#include "doctest.h"

#include "bundleduel/io.hpp"

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

using namespace bundleduel;

TEST_CASE("distribution files round-trip through format and parse") {
  const ValueGrid grid = make_grid(0.25, 2.0);
  const std::vector<std::pair<Money, double>> atoms = {{0.5, 0.25}, {2.0, 0.75}};
  const DiscreteDistribution d = make_distribution(grid, atoms);

  const std::string text = format_distribution(d);
  CHECK(text.rfind("# grid_step=", 0) == 0);
  const DiscreteDistribution back = parse_distribution(text, "roundtrip");
  CHECK(back.grid().step == d.grid().step);
  CHECK(back.grid().max_tick == d.grid().max_tick);
  REQUIRE(back.atoms().size() == d.atoms().size());
  for (std::size_t i = 0; i < d.atoms().size(); ++i) {
    CHECK(back.atoms()[i].tick == d.atoms()[i].tick);
    CHECK(back.atoms()[i].prob == d.atoms()[i].prob);  // bit-exact round-trip
  }
}

TEST_CASE("distribution parse errors carry line numbers") {
  try {
    parse_distribution("1\t0.5\n", "t");
    FAIL("missing header accepted");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 1);
  }
  try {
    parse_distribution("# grid_step=1 max_value=4\n\n1 0.5 9\n", "t");
    FAIL("three-token atom line accepted");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 3);
  }
  // Validation failures past parsing keep their own exception types.
  CHECK_THROWS_AS(parse_distribution("# grid_step=1 max_value=4\n1\t0.5\n", "t"),
                  ProbSumMismatch);
}

TEST_CASE("menu lines round-trip for every kind") {
  const ValueGrid grid = make_grid(0.1, 1.0);

  const Menu grand = parse_menu("grand 0.7\n", 3, grid, "t");
  CHECK(grand.kind() == MenuKind::GrandBundle);
  CHECK(grand.grand_price_ticks() == 7);
  CHECK(format_menu(grand, grid) == "grand 0.7\n");

  const Menu part = parse_menu("# pair and single\npartition {1,2}=0.5 {3}=0.2\n", 3, grid, "t");
  CHECK(part.kind() == MenuKind::Partition);
  REQUIRE(part.entries().size() == 2);
  CHECK(part.entries()[0].items == 0b011);
  CHECK(part.entries()[0].price == 5);
  CHECK(part.entries()[1].items == 0b100);
  CHECK(part.entries()[1].price == 2);
  CHECK(format_menu(part, grid) == "partition {1,2}=0.5 {3}=0.2\n");

  const Menu exp = parse_menu("explicit {1}=0.3 {1,2}=0.4\n", 2, grid, "t");
  CHECK(exp.kind() == MenuKind::Explicit);
  CHECK(format_menu(exp, grid) == "explicit {1}=0.3 {1,2}=0.4\n");
}

TEST_CASE("menu parse errors: malformed entries, bad indices, off-grid prices") {
  const ValueGrid grid = make_grid(0.1, 1.0);
  CHECK_THROWS_AS(parse_menu("grand\n", 2, grid, "t"), ParseError);
  CHECK_THROWS_AS(parse_menu("conjure 0.5\n", 2, grid, "t"), ParseError);
  CHECK_THROWS_AS(parse_menu("partition {1,2=0.5\n", 2, grid, "t"), ParseError);
  CHECK_THROWS_AS(parse_menu("partition {0}=0.5\n", 2, grid, "t"), ParseError);   // 1-based
  CHECK_THROWS_AS(parse_menu("partition {3}=0.5\n", 2, grid, "t"), ParseError);   // out of range
  CHECK_THROWS_AS(parse_menu("partition {}=0.5\n", 2, grid, "t"), ParseError);
  CHECK_THROWS_AS(parse_menu("grand 0.55\n", 2, grid, "t"), OffGridValue);
  CHECK_THROWS_AS(parse_menu("grand 1\ngrand 2\n", 2, grid, "t"), ParseError);    // two lines
  try {
    parse_menu("# leading comment\npartition {1}=x\n", 2, grid, "t");
    FAIL("bad price accepted");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 2);
  }
}

TEST_CASE("config files: sections, comments, typed getters") {
  const std::string text =
      "# experiment\n"
      "[solver]\n"
      "seeds = 1,2\n"
      "tol = 1e-9   # inline comment\n"
      "[sweep]\n"
      "k = 3\n";
  const ExperimentConfig cfg = parse_config(text, "t");
  CHECK(cfg.get("solver.seeds") == "1,2");
  CHECK(cfg.get_double("solver.tol", 0.0) == 1e-9);
  CHECK(cfg.get_int("sweep.k", 0) == 3);
  CHECK(cfg.get_int("sweep.n", 7) == 7);  // fallback
  CHECK(cfg.get("missing", "dflt") == "dflt");
  CHECK(cfg.has("solver.tol"));
  CHECK(!cfg.has("solver.missing"));

  try {
    parse_config("[solver]\nno_equals_here\n", "t");
    FAIL("bare token accepted");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 2);
  }
  CHECK_THROWS_AS(parse_config("[]\n", "t"), ParseError);
  CHECK_THROWS_AS(cfg.get_int("solver.seeds", 0), ParseError);  // "1,2" is not an integer
}

TEST_CASE("certificate documents are schema-1 json and deterministic") {
  const ValueGrid grid = make_grid(0.1, 1.0);
  const Menu menu = Menu::grand_bundle(1, 5);
  EquilibriumCertificate cert;
  cert.profile = {pure_strategy(5)};
  cert.per_seller_regret = {0.0};
  cert.epsilon = 0.0;
  cert.principal_revenue = 0.5;
  cert.method = SolveMethod::Verified;
  cert.seed = 9;

  const std::string text = certificate_json(cert, menu, grid);
  CHECK(text == certificate_json(cert, menu, grid));  // byte-identical rerun

  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("schema") == 1);
  CHECK(j.at("kind") == "equilibrium_certificate");
  CHECK(j.at("method") == "verified");
  CHECK(j.at("menu").at("kind") == "grand_bundle");
  CHECK(j.at("menu").at("item_count") == 1);
  CHECK(j.at("menu").at("entries")[0].at("items")[0] == 1);
  CHECK(j.at("menu").at("entries")[0].at("price") == doctest::Approx(0.5));
  CHECK(j.at("principal_revenue") == doctest::Approx(0.5));
  REQUIRE(j.at("sellers").size() == 1);
  CHECK(j.at("sellers")[0].at("prices")[0] == doctest::Approx(0.5));
  CHECK(j.at("sellers")[0].at("probs")[0] == 1.0);
  CHECK(j.at("sellers")[0].at("regret") == 0.0);
}

TEST_CASE("benchmark and lemma reports parse back with their headline fields") {
  BenchmarkReport report;
  report.truncated_welfare = 2.0;
  report.K = 1.0;
  report.C = 0.5;
  report.myerson_prices = {1.0};
  report.strict_cdf_at_r = {0.5};
  report.lambda_per_item = {0.25};
  const auto j = nlohmann::json::parse(benchmark_report_json(report));
  CHECK(j.at("schema") == 1);
  CHECK(j.at("kind") == "benchmark_report");
  CHECK(j.at("C") == doctest::Approx(0.5));
  CHECK(j.at("breakdown").at("lambda_positive") == false);

  LemmaCheck check;
  check.lemma = "remBound";
  check.hypothesis_met = true;
  check.pass = true;
  check.slack = 0.125;
  const auto lj = nlohmann::json::parse(lemma_checks_json({check}));
  CHECK(lj.at("kind") == "lemma_checks");
  CHECK(lj.at("all_pass") == true);
  CHECK(lj.at("checks")[0].at("lemma") == "remBound");
  CHECK(lj.at("checks")[0].at("slack") == doctest::Approx(0.125));
}

TEST_CASE("sweep tables: csv with crlf rows, plot data with a commented header") {
  SweepRow row;
  row.price = 2.5;
  row.price_ticks = 25;
  row.min_revenue = 0.5;
  row.max_revenue = 1.25;
  row.n_equilibria = 3;
  row.n_unconverged = 0;
  row.bound_ok = true;
  row.lemma_bound = 0.25;
  row.min_copy_sale_prob = 0.5;
  row.no_sale_possible = false;

  CHECK(sweep_csv({row}) ==
        "price,min_rev,max_rev,n_equilibria,bound_36_flag\r\n"
        "2.5,0.5,1.25,3,1\r\n");
  CHECK(sweep_plot_data({row}) ==
        "# price min_rev max_rev lemma_bound min_copy_sale_prob"
        " n_equilibria n_unconverged no_sale_possible bound_ok\n"
        "2.5 0.5 1.25 0.25 0.5 3 0 0 1\n");
}

TEST_CASE("text files write and read back verbatim") {
  const std::string path = "io_roundtrip_tmp.txt";
  const std::string content = "alpha\nbeta\r\n# gamma\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("definitely_missing_file.txt"), std::runtime_error);
}
