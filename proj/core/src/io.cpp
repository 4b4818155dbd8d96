#include "bundleduel/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "bundleduel/errors.hpp"

namespace bundleduel {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Grid values print as the shortest fixed decimal that snaps back to the
// same tick, so files stay human-editable: tick 7 on a 0.1 grid prints as
// "0.7", not the raw shortest form "0.7000000000000001" of 7 * 0.1.
std::string grid_num(const ValueGrid& grid, Tick t) {
  const double v = grid.value(t);
  for (int p = 0; p <= 17; ++p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", p, v);
    const auto snapped = grid.snap(std::strtod(buf, nullptr));
    if (snapped && *snapped == t) return buf;
  }
  return num(v);
}

// JSON has no infinities; encode non-finite doubles as strings.
Json json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double parse_double(const std::string& token, const std::string& origin, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError(origin + ": expected a number, got '" + token + "'", line);
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// `{1,4,5}=<price>` with 1-based item indices.
MenuEntry parse_entry(const std::string& token, int item_count, const ValueGrid& grid,
                      const std::string& origin, int line) {
  const auto eq = token.find('=');
  if (token.empty() || token.front() != '{' || eq == std::string::npos || eq < 2 ||
      token[eq - 1] != '}') {
    throw ParseError(origin + ": menu entry must look like {1,2}=<price>", line);
  }
  MenuEntry entry;
  const std::string inner = token.substr(1, eq - 2);
  std::istringstream in(inner);
  std::string field;
  while (std::getline(in, field, ',')) {
    const std::string t = trim(field);
    std::int64_t idx = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), idx);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || idx < 1 || idx > item_count) {
      throw ParseError(origin + ": bad item index '" + t + "'", line);
    }
    entry.items |= ItemMask{1} << (idx - 1);
  }
  if (entry.items == 0) throw ParseError(origin + ": empty item set in menu entry", line);
  entry.price = grid.to_tick(parse_double(token.substr(eq + 1), origin, line));
  return entry;
}

}  // namespace

// ---- distributions ----

DiscreteDistribution parse_distribution(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool have_header = false;
  ValueGrid grid{};
  std::vector<std::pair<Money, double>> atoms;

  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (!have_header) {
      if (s.front() != '#') throw ParseError(origin + ": missing grid header line", line);
      double step = -1.0;
      double max_value = -1.0;
      for (const std::string& tok : split_ws(s.substr(1))) {
        if (tok.rfind("grid_step=", 0) == 0) {
          step = parse_double(tok.substr(10), origin, line);
        } else if (tok.rfind("max_value=", 0) == 0) {
          max_value = parse_double(tok.substr(10), origin, line);
        }
      }
      if (step <= 0.0 || max_value < 0.0) {
        throw ParseError(origin + ": header needs grid_step=<step> max_value=<max>", line);
      }
      grid = make_grid(step, max_value);
      have_header = true;
      continue;
    }
    if (s.front() == '#') continue;
    const std::vector<std::string> tok = split_ws(s);
    if (tok.size() != 2) throw ParseError(origin + ": expected `value<TAB>prob`", line);
    atoms.emplace_back(parse_double(tok[0], origin, line), parse_double(tok[1], origin, line));
  }
  if (!have_header) throw ParseError(origin + ": empty distribution file", line);
  if (atoms.empty()) throw ParseError(origin + ": no atoms", line);
  return make_distribution(grid, atoms);
}

std::string format_distribution(const DiscreteDistribution& d) {
  std::string out = "# grid_step=" + num(d.grid().step) + " max_value=" +
                    grid_num(d.grid(), d.grid().max_tick) + "\n";
  for (const Atom& a : d.atoms()) {
    out += grid_num(d.grid(), a.tick) + "\t" + num(a.prob) + "\n";
  }
  return out;
}

DiscreteDistribution read_distribution(const std::string& path) {
  return parse_distribution(read_text_file(path), path);
}

void write_distribution(const DiscreteDistribution& d, const std::string& path) {
  write_text_file(path, format_distribution(d));
}

// ---- menus ----

Menu parse_menu(const std::string& text, int item_count, const ValueGrid& grid,
                const std::string& origin) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::string content;
  int content_line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    if (!content.empty()) throw ParseError(origin + ": menu files hold a single line", line);
    content = s;
    content_line = line;
  }
  if (content.empty()) throw ParseError(origin + ": empty menu file", line);

  const std::vector<std::string> tok = split_ws(content);
  const std::string& kind = tok.front();
  if (kind == "grand") {
    if (tok.size() != 2) throw ParseError(origin + ": expected `grand <price>`", content_line);
    return Menu::grand_bundle(item_count, grid.to_tick(parse_double(tok[1], origin, content_line)));
  }
  std::vector<MenuEntry> entries;
  entries.reserve(tok.size() - 1);
  for (std::size_t i = 1; i < tok.size(); ++i) {
    entries.push_back(parse_entry(tok[i], item_count, grid, origin, content_line));
  }
  if (entries.empty()) throw ParseError(origin + ": menu needs at least one entry", content_line);
  if (kind == "partition") return Menu::partition(item_count, std::move(entries));
  if (kind == "explicit") return Menu::explicit_menu(item_count, std::move(entries));
  throw ParseError(origin + ": unknown menu kind '" + kind + "'", content_line);
}

std::string format_menu(const Menu& menu, const ValueGrid& grid) {
  if (menu.kind() == MenuKind::GrandBundle) {
    return "grand " + grid_num(grid, menu.grand_price_ticks()) + "\n";
  }
  std::string out = menu.kind() == MenuKind::Partition ? "partition" : "explicit";
  for (const MenuEntry& e : menu.entries()) {
    out += " {";
    bool first = true;
    for (int i = 0; i < menu.item_count(); ++i) {
      if (!((e.items >> i) & 1u)) continue;
      if (!first) out += ",";
      out += std::to_string(i + 1);
      first = false;
    }
    out += "}=" + grid_num(grid, e.price);
  }
  out += "\n";
  return out;
}

Menu read_menu(const std::string& path, int item_count, const ValueGrid& grid) {
  return parse_menu(read_text_file(path), item_count, grid, path);
}

// ---- config ----

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  return parse_double(it->second, "config key " + key, 0);
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  const std::string& s = it->second;
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError("config key " + key + ": expected an integer, got '" + s + "'", 0);
  }
  return v;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::string section;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) {
        throw ParseError(origin + ": malformed section header", line);
      }
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ParseError(origin + ": empty section name", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(origin + ": expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError(origin + ": empty key", line);
    cfg.values[section.empty() ? key : section + "." + key] = trim(s.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig read_config(const std::string& path) {
  return parse_config(read_text_file(path), path);
}

// ---- reports ----

namespace {

Json menu_json(const Menu& menu, const ValueGrid& grid) {
  Json j;
  switch (menu.kind()) {
    case MenuKind::GrandBundle:
      j["kind"] = "grand_bundle";
      break;
    case MenuKind::Partition:
      j["kind"] = "partition";
      break;
    case MenuKind::Explicit:
      j["kind"] = "explicit";
      break;
  }
  j["item_count"] = menu.item_count();
  Json entries = Json::array();
  for (const MenuEntry& e : menu.entries()) {
    Json entry;
    Json items = Json::array();
    for (int i = 0; i < menu.item_count(); ++i) {
      if ((e.items >> i) & 1u) items.push_back(i + 1);
    }
    entry["items"] = std::move(items);
    entry["price"] = grid.value(e.price);
    entries.push_back(std::move(entry));
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace

std::string certificate_json(const EquilibriumCertificate& cert, const Menu& menu,
                             const ValueGrid& grid) {
  Json j;
  j["schema"] = 1;
  j["kind"] = "equilibrium_certificate";
  j["menu"] = menu_json(menu, grid);
  j["method"] = to_string(cert.method);
  j["seed"] = cert.seed;
  j["iterations"] = cert.iterations;
  j["epsilon"] = json_num(cert.epsilon);
  j["principal_revenue"] = json_num(cert.principal_revenue);
  j["lex_tiebreak_used"] = cert.lex_tiebreak_used;
  Json sellers = Json::array();
  for (std::size_t i = 0; i < cert.profile.size(); ++i) {
    const MixedStrategy& s = cert.profile[i];
    Json seller;
    Json prices = Json::array();
    Json probs = Json::array();
    for (std::size_t k = 0; k < s.ticks.size(); ++k) {
      prices.push_back(grid.value(s.ticks[k]));
      probs.push_back(s.probs[k]);
    }
    seller["prices"] = std::move(prices);
    seller["probs"] = std::move(probs);
    seller["regret"] = json_num(cert.per_seller_regret[i]);
    sellers.push_back(std::move(seller));
  }
  j["sellers"] = std::move(sellers);
  return j.dump(2) + "\n";
}

std::string benchmark_report_json(const BenchmarkReport& report) {
  Json j;
  j["schema"] = 1;
  j["kind"] = "benchmark_report";
  j["truncated_welfare"] = json_num(report.truncated_welfare);
  j["sigma_truncated"] = json_num(report.sigma_truncated);
  j["K"] = json_num(report.K);
  j["C"] = json_num(report.C);
  j["lambda_min"] = json_num(report.lambda_min);
  j["hypothesis_ok"] = report.hypothesis_ok;
  j["breakdown"] = {{"lambda_positive", report.breakdown.lambda_positive},
                    {"sigma_large_enough", report.breakdown.sigma_large_enough},
                    {"sigma_threshold", json_num(report.breakdown.sigma_threshold)}};
  j["bundle_price"] = json_num(report.bundle_price);
  j["myerson_prices"] = report.myerson_prices;
  j["strict_cdf_at_r"] = report.strict_cdf_at_r;
  j["lambda_per_item"] = report.lambda_per_item;
  return j.dump(2) + "\n";
}

std::string lemma_checks_json(const std::vector<LemmaCheck>& checks) {
  Json j;
  j["schema"] = 1;
  j["kind"] = "lemma_checks";
  bool all_pass = true;
  Json rows = Json::array();
  for (const LemmaCheck& c : checks) {
    all_pass = all_pass && c.pass;
    Json row;
    row["lemma"] = c.lemma;
    row["hypothesis_met"] = c.hypothesis_met;
    row["pass"] = c.pass;
    row["slack"] = json_num(c.slack);
    row["detail"] = c.detail;
    rows.push_back(std::move(row));
  }
  j["all_pass"] = all_pass;
  j["checks"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "price,min_rev,max_rev,n_equilibria,bound_36_flag\r\n";
  for (const SweepRow& r : rows) {
    out += num(r.price) + "," + num(r.min_revenue) + "," + num(r.max_revenue) + "," +
           std::to_string(r.n_equilibria) + "," + (r.bound_ok ? "1" : "0") + "\r\n";
  }
  return out;
}

std::string sweep_plot_data(const std::vector<SweepRow>& rows) {
  std::string out =
      "# price min_rev max_rev lemma_bound min_copy_sale_prob"
      " n_equilibria n_unconverged no_sale_possible bound_ok\n";
  for (const SweepRow& r : rows) {
    out += num(r.price) + " " + num(r.min_revenue) + " " + num(r.max_revenue) + " " +
           num(r.lemma_bound) + " " + num(r.min_copy_sale_prob) + " " +
           std::to_string(r.n_equilibria) + " " + std::to_string(r.n_unconverged) + " " +
           (r.no_sale_possible ? "1" : "0") + " " + (r.bound_ok ? "1" : "0") + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace bundleduel
