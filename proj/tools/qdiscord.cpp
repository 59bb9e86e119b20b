// qdiscord command-line front end.
//
//   qdiscord compute   --state named:paper_cx_1p11 --measure gqd --partition "A|B|C"
//   qdiscord reproduce gqd_counterexample
//   qdiscord scan      --suite prop1 --samples 100 --out rows.csv
//
// Exit codes: 0 success, 1 mismatch or violation, 2 usage / input error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdiscord/discord.hpp"
#include "qdiscord/monogamy.hpp"
#include "qdiscord/partition.hpp"
#include "qdiscord/scan.hpp"
#include "qdiscord/state_file.hpp"

using namespace qdiscord;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fixed6(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

std::string num(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(10) << v;
  return s.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  for (const auto& part : split(text, text.find('x') != std::string::npos ? 'x' : ',')) {
    try {
      dims.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw ArgumentError("bad dimension list '" + text + "'");
    }
  }
  if (dims.empty()) throw ArgumentError("empty dimension list");
  return dims;
}

// named:NAME[:p1,p2,...] | file:PATH | sample:SAMPLER@DIMS (seed from --seed)
DensityMatrix load_state_source(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ArgumentError("state source must start with named:, file: or sample:");
  const std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
  if (kind == "named") {
    const auto c2 = rest.find(':');
    std::vector<double> params;
    if (c2 != std::string::npos) {
      for (const auto& p : split(rest.substr(c2 + 1), ',')) {
        try {
          params.push_back(std::stod(p));
        } catch (const std::exception&) {
          throw ArgumentError("bad state parameter '" + p + "'");
        }
      }
    }
    return make_named_state(rest.substr(0, c2), params);
  }
  if (kind == "file") return load_state(rest);
  if (kind == "sample") {
    const auto at = rest.find('@');
    if (at == std::string::npos) throw ArgumentError("sample source needs SAMPLER@DIMS, e.g. sample:ginibre:2@2x2x2");
    return draw_state(SamplerSpec::parse(rest.substr(0, at)), parse_dims(rest.substr(at + 1)), seed);
  }
  throw ArgumentError("unknown state source '" + kind + "'");
}

struct CommonOptions {
  int restarts = -1;
  int grid = -1;
  int max_iters = -1;
  double f_tol = -1;
  long long seed = 0;
  std::string config_path;
};

void add_optimizer_flags(CLI::App* app, CommonOptions& o) {
  app->add_option("--restarts", o.restarts, "simplex restarts (default 24)");
  app->add_option("--grid", o.grid, "qubit grid points per angle (default 13, 0 disables)");
  app->add_option("--max-iters", o.max_iters, "simplex iterations per restart");
  app->add_option("--f-tol", o.f_tol, "objective tolerance in bits");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--config", o.config_path, "JSON file with optimizer settings");
}

OptimizerConfig build_config(const CommonOptions& o) {
  OptimizerConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ArgumentError("cannot open config " + o.config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ArgumentError("config " + o.config_path + ": " + e.what());
    }
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.grid_points_per_angle = j.value("grid_points_per_angle", cfg.grid_points_per_angle);
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.f_tol = j.value("f_tol", cfg.f_tol);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_grid_evals = j.value("max_grid_evals", cfg.max_grid_evals);
  }
  if (o.restarts >= 0) cfg.restarts = o.restarts;
  if (o.grid >= 0) cfg.grid_points_per_angle = o.grid;
  if (o.max_iters >= 0) cfg.max_iters = o.max_iters;
  if (o.f_tol >= 0) cfg.f_tol = o.f_tol;
  if (o.seed != 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  cfg.validate();
  return cfg;
}

json config_json(const OptimizerConfig& cfg) {
  return {{"restarts", cfg.restarts},         {"grid_points_per_angle", cfg.grid_points_per_angle},
          {"max_iters", cfg.max_iters},       {"f_tol", cfg.f_tol},
          {"seed", cfg.seed},                 {"max_grid_evals", cfg.max_grid_evals}};
}

json result_json(const DiscordResult& r) {
  json ordering = json::array();
  for (const Block& b : r.ordering) ordering.push_back(block_to_string(b));
  json j = {{"measure", to_string(r.kind)},
            {"partition", r.partition.to_string()},
            {"ordering", ordering},
            {"value", r.value},
            {"raw_value", r.raw_value},
            {"clamped", r.clamped},
            {"optimizer",
             {{"params", r.opt.params},
              {"iterations", r.opt.iterations},
              {"restart_index", r.opt.restart_index},
              {"spread", r.opt.spread},
              {"certified", r.opt.certified},
              {"evaluations", r.opt.evaluations},
              {"grid_points_used", r.opt.grid_points_used}}}};
  if (r.tree) {
    json levels = json::array();
    for (const auto& level : r.tree->levels()) {
      json nodes = json::array();
      for (const auto& node : level) nodes.push_back(node.params);
      levels.push_back(nodes);
    }
    j["measurement"] = {{"type", "tree"}, {"levels", levels}};
  }
  if (r.product) {
    json bases = json::array();
    for (const auto& b : r.product->bases) bases.push_back({{"block", block_to_string(b.target)}, {"params", b.params}});
    j["measurement"] = {{"type", "product"}, {"bases", bases}};
  }
  return j;
}

std::string value_label(const DiscordResult& r) {
  return "D_{" + discord_key(r.ordering, r.kind == MeasureKind::GQD ? ':' : ';') + "}";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ArgumentError("write failed for " + path);
}

// ---------------------------------------------------------------------------

struct ComputeOptions {
  std::string state, measure = "mqd", partition, out, format = "json";
  CommonOptions common;
};

int run_compute(const ComputeOptions& o) {
  const OptimizerConfig cfg = build_config(o.common);
  const DensityMatrix rho = load_state_source(o.state, cfg.seed);
  const MeasureKind kind = parse_measure_kind(o.measure);
  const Partition partition = Partition::parse(o.partition);
  const auto t0 = std::chrono::steady_clock::now();
  const DiscordResult r = compute_discord(rho, kind, partition, cfg);
  const double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << value_label(r) << " = " << fixed6(r.value) << " bits" << (r.opt.certified ? " (certified grid)" : "")
            << "\n";
  if (!o.out.empty()) {
    if (o.format == "json") {
      json j = result_json(r);
      j["state"] = o.state;
      j["config"] = config_json(cfg);
      j["wall_ms"] = wall_ms;
      j["version"] = kVersion;
      write_text(o.out, j.dump(2) + "\n");
    } else if (o.format == "csv") {
      std::ostringstream s;
      s << "state_id,measure,partition,value,margin,verdict,spread,wall_ms\n"
        << o.state << ',' << to_string(kind) << ',' << partition.to_string() << ',' << num(r.value) << ",,,"
        << num(r.opt.spread) << ',' << num(wall_ms) << "\n";
      write_text(o.out, s.str());
    } else {
      throw ArgumentError("unknown format '" + o.format + "'");
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct Expectation {
  std::string what;
  double value;
  bool ok;
};

int report(const std::string& title, const std::vector<Expectation>& items, json& out) {
  bool all = true;
  std::cout << title << "\n";
  json arr = json::array();
  for (const auto& e : items) {
    std::cout << "  " << (e.ok ? "ok   " : "FAIL ") << e.what << "  (" << fixed6(e.value) << ")\n";
    arr.push_back({{"check", e.what}, {"value", e.value}, {"ok", e.ok}});
    all = all && e.ok;
  }
  out["checks"] = arr;
  out["match"] = all;
  return all ? 0 : 1;
}

std::set<Partition> parse_set(const std::string& listing) {
  std::set<Partition> out;
  for (const auto& item : split(listing, ',')) out.insert(Partition::parse(item));
  return out;
}

int diff_sets(const std::string& title, const std::set<Partition>& expected, const std::set<Partition>& got, json& out) {
  std::vector<std::string> missing, extra;
  for (const auto& p : expected)
    if (!got.count(p)) missing.push_back(p.to_string());
  for (const auto& p : got)
    if (!expected.count(p)) extra.push_back(p.to_string());
  const bool match = missing.empty() && extra.empty();
  std::cout << (match ? "ok   " : "FAIL ") << title << ": expected " << expected.size() << ", computed " << got.size()
            << "\n";
  for (const auto& m : missing) std::cout << "  - " << m << "  (expected, not computed)\n";
  for (const auto& e : extra) std::cout << "  + " << e << "  (computed, not expected)\n";
  out[title] = {{"expected", expected.size()}, {"computed", got.size()}, {"missing", missing}, {"extra", extra},
                {"match", match}};
  return match ? 0 : 1;
}

const char* kXiFirst = "CD|E,A|CD|E,B|CD|E,A|CD,A|E,B|E,A|C,A|D,B|C,B|D";
const char* kXiSecond =
    "B|D|E,B|D,B|E,D|E,A|B,A|D,A|E,B|C,C|D,C|E,A|B|D,A|BD,AB|D,A|B|E,A|BE,AB|E,A|D|E,A|DE,AD|E,B|C|D,B|CD,BC|D,"
    "B|C|E,B|CE,BC|E,B|DE,BD|E,C|D|E,C|DE,CD|E,A|B|D|E,B|C|D|E,AB|DE,BC|DE,A|BDE,ABD|E,B|CDE,BCD|E,A|B|DE,AB|D|E,"
    "A|BD|E,BC|D|E,B|CD|E,B|C|DE";
const char* kFourFirst = "A|B|D,A|C|D,B|C|D,A|D,B|D,C|D";
const char* kFourSecond = "C|D,A|C|D,B|C|D,A|C,A|D,B|C,B|D";

int run_reproduce(const std::string& target, const CommonOptions& common, const std::string& out_path) {
  const OptimizerConfig cfg = build_config(common);
  json out = {{"target", target}, {"config", config_json(cfg)}, {"version", kVersion}};
  int code = 0;
  if (target == "gqd_counterexample") {
    const DensityMatrix rho = make_named_state("paper_cx_1p11");
    DiscordCache cache(rho, cfg);
    const double abc = cache.get("A:B:C").value, ab = cache.get("A:B").value, ac = cache.get("A:C").value,
                 bc = cache.get("B:C").value;
    auto in_window = [](double v) { return v >= 0.199 && v <= 0.209; };
    const MonogamyReport rep = check_discorrelated(rho, MeasureKind::GQD, Partition::parse("A|B|C"),
                                                   Partition::parse("A|B"), cfg, {}, "paper_cx_1p11");
    code = report("GQD counterexample, rho = (|000><000| + |1+1><1+1|)/2",
                  {{"D_{A:B:C} in [0.199, 0.209]", abc, in_window(abc)},
                   {"D_{A:B} in [0.199, 0.209]", ab, in_window(ab)},
                   {"|D_{A:B:C} - D_{A:B}| <= 2e-3", std::abs(abc - ab), std::abs(abc - ab) <= 2e-3},
                   {"D_{A:C} <= 1e-4", ac, ac <= 1e-4},
                   {"D_{B:C} = D_{A:B} within 2e-3", bc, std::abs(bc - ab) <= 2e-3 && in_window(bc)},
                   {"dis-correlated condition fails for (A|B|C, A|B)", rep.discorrelated ? 1.0 : 0.0,
                    rep.equal && !rep.discorrelated}},
                  out);
  } else if (target == "gqd_incompatibility") {
    const DensityMatrix rho = make_named_state("paper_cx_p11");
    DiscordCache cache(rho, cfg);
    const double abc = cache.get("AB:C").value, ac = cache.get("A:C").value;
    code = report("GQD incompatibility, rho = (|000><000| + |+11><+11|)/2",
                  {{"D_{AB:C} <= 1e-4", abc, abc <= 1e-4}, {"D_{A:C} >= 0.05", ac, ac >= 0.05},
                   {"D_{AB:C} < D_{A:C}", ac - abc, abc < ac}},
                  out);
  } else if (target == "xi_listings") {
    code |= diff_sets("Xi(A|B|CD|E - A|B)", parse_set(kXiFirst),
                      xi_set(Partition::parse("A|B|CD|E"), Partition::parse("A|B")), out);
    code |= diff_sets("Xi(A|B|C|D|E - A|C)", parse_set(kXiSecond),
                      xi_set(Partition::parse("A|B|C|D|E"), Partition::parse("A|C")), out);
  } else if (target == "fourpartite_discorrelation") {
    const Partition top = Partition::parse("A|B|C|D");
    code |= diff_sets("Xi(A|B|C|D - A|B|C)", parse_set(kFourFirst), xi_set(top, Partition::parse("A|B|C")), out);
    code |= diff_sets("Xi(A|B|C|D - A|B)", parse_set(kFourSecond), xi_set(top, Partition::parse("A|B")), out);
    json info;
    std::cout << "informational, discard-only coarsening:\n";
    diff_sets("Xi_C1(A|B|C|D - A|B|C)", parse_set(kFourFirst),
              xi_set(top, Partition::parse("A|B|C"), MoveSet::discard_only()), info);
    diff_sets("Xi_C1(A|B|C|D - A|B)", parse_set(kFourSecond),
              xi_set(top, Partition::parse("A|B"), MoveSet::discard_only()), info);
    out["discard_only"] = info;
  } else {
    throw ArgumentError("unknown reproduce target '" + target +
                        "' (gqd_counterexample, gqd_incompatibility, xi_listings, fourpartite_discorrelation)");
  }
  std::cout << (code == 0 ? "MATCH" : "MISMATCH") << "\n";
  if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
  return code;
}

// ---------------------------------------------------------------------------

struct ScanOptions {
  std::string suite = "prop1", dims = "2,2,2", sampler = "ginibre", measure = "mqd", out, violations;
  long samples = 100;
  CommonOptions common;
};

int run_scan(const ScanOptions& o) {
  const OptimizerConfig cfg = build_config(o.common);
  const std::vector<int> dims = parse_dims(o.dims);
  const SamplerSpec sampler = SamplerSpec::parse(o.sampler);
  if (o.samples < 0) throw ArgumentError("--samples must be >= 0");
  const std::uint64_t base = cfg.seed;
  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv << "state_id,measure,check,lhs,rhs,margin,verdict,spread,wall_ms\n";
  std::vector<std::pair<std::string, DensityMatrix>> offenders;
  bool violation = false;

  struct Stat {
    long count = 0, holds = 0, violated = 0, inconclusive = 0;
    double worst = std::numeric_limits<double>::infinity();
  };
  std::map<std::string, Stat> stats;
  std::vector<std::string> order;
  auto tally = [&](const std::string& name, double margin, const std::string& verdict) {
    if (!stats.count(name)) order.push_back(name);
    Stat& s = stats[name];
    ++s.count;
    s.worst = std::min(s.worst, margin);
    if (verdict == "holds") ++s.holds;
    else if (verdict == "violated") ++s.violated;
    else ++s.inconclusive;
  };

  if (o.suite == "assumptions") {
    const MeasureKind kind = parse_measure_kind(o.measure);
    const auto t0 = std::chrono::steady_clock::now();
    const ScanSummary summary = scan_assumptions(o.samples, dims, kind, cfg, base, sampler);
    const double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const double per_state = o.samples > 0 ? wall_ms / o.samples : 0.0;
    for (const auto& row : summary.rows) {
      const std::string verdict = row.margin >= -1e-9 ? "holds" : "violated";
      csv << "s" << row.sample << ',' << to_string(kind) << ',' << '"' << row.comparison << '"' << ',' << num(row.left)
          << ',' << num(row.right) << ',' << num(row.margin) << ',' << verdict << ",," << num(per_state) << "\n";
      tally(row.comparison, row.margin, verdict);
    }
    for (const auto& off : summary.offenders) {
      offenders.emplace_back("s" + std::to_string(off.sample) + "_seed" + std::to_string(off.seed), off.state);
      violation = true;
    }
  } else if (o.suite == "prop1" || o.suite == "prop3" || o.suite == "thm1" || o.suite == "prop4") {
    struct Row {
      std::vector<InequalityCheck> checks;
      double wall_ms = 0.0;
    };
    std::vector<Row> rows(o.samples);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < o.samples; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t s = sample_seed(base, static_cast<std::uint64_t>(i));
      const DensityMatrix rho = draw_state(sampler, dims, s);
      OptimizerConfig local = cfg;
      local.seed = s;
      DiscordCache cache(rho, local);
      rows[i].checks = check_proposition(cache, o.suite);
      rows[i].wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    for (long i = 0; i < o.samples; ++i) {
      bool bad = false;
      for (const auto& c : rows[i].checks) {
        const std::string verdict = to_string(c.verdict);
        csv << "s" << i << ",mqd," << c.name << ',' << num(c.lhs) << ',' << num(c.rhs) << ',' << num(c.margin) << ','
            << verdict << ',' << num(c.spread) << ',' << num(rows[i].wall_ms) << "\n";
        tally(c.name, c.margin, verdict);
        bad = bad || c.verdict == Verdict::Violated;
      }
      if (bad) {
        const std::uint64_t s = sample_seed(base, static_cast<std::uint64_t>(i));
        offenders.emplace_back("s" + std::to_string(i) + "_seed" + std::to_string(s), draw_state(sampler, dims, s));
        violation = true;
      }
    }
  } else {
    throw ArgumentError("unknown suite '" + o.suite + "' (prop1, prop3, prop4, thm1, assumptions)");
  }

  if (!o.out.empty()) write_text(o.out, csv.str());
  if (!o.violations.empty() && !offenders.empty()) {
    std::filesystem::create_directories(o.violations);
    for (const auto& [name, rho] : offenders)
      save_state(std::filesystem::path(o.violations) / (name + ".qstate"), rho,
                 "offending state from scan suite " + o.suite + ", sampler " + sampler.to_string());
  }
  std::cout << "suite " << o.suite << ", " << o.samples << " samples, sampler " << sampler.to_string() << "\n";
  for (const auto& name : order) {
    const Stat& s = stats[name];
    std::cout << "  " << std::left << std::setw(40) << name << " n=" << s.count << " holds=" << s.holds
              << " violated=" << s.violated << " inconclusive=" << s.inconclusive << " worst_margin=" << num(s.worst)
              << "\n";
  }
  std::cout << (violation ? "violations found: " + std::to_string(offenders.size()) + " state(s)" : "no violations")
            << "\n";
  return violation ? 1 : 0;
}

void apply_thread_env() {
  if (const char* env = std::getenv("QDISCORD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{"Quantum discord measures and monogamy checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ComputeOptions compute;
  auto* c = app.add_subcommand("compute", "evaluate one discord value");
  c->add_option("--state", compute.state, "named:NAME[:p1,p2] | file:PATH | sample:SAMPLER@DIMS")->required();
  c->add_option("--measure", compute.measure, "qd | mqd | gqd")->check(CLI::IsMember({"qd", "mqd", "gqd"}));
  c->add_option("--partition", compute.partition, "blocks joined by '|', e.g. \"A|BC\"")->required();
  c->add_option("--out", compute.out, "report file");
  c->add_option("--format", compute.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  add_optimizer_flags(c, compute.common);

  std::string target, reproduce_out;
  CommonOptions reproduce_common;
  auto* r = app.add_subcommand("reproduce", "run a canned experiment and diff against expected values");
  r->add_option("target", target, "gqd_counterexample | gqd_incompatibility | xi_listings | fourpartite_discorrelation")
      ->required();
  r->add_option("--out", reproduce_out, "JSON report");
  add_optimizer_flags(r, reproduce_common);

  ScanOptions scan;
  auto* s = app.add_subcommand("scan", "sample random states and check inequalities or assumptions");
  s->add_option("--suite", scan.suite, "prop1 | prop3 | prop4 | thm1 | assumptions");
  s->add_option("--samples", scan.samples, "number of states");
  s->add_option("--dims", scan.dims, "subsystem dimensions, e.g. 2,2,2");
  s->add_option("--sampler", scan.sampler, "ginibre[:rank] | classical | product");
  s->add_option("--measure", scan.measure, "mqd | gqd (assumptions suite)")->check(CLI::IsMember({"mqd", "gqd"}));
  s->add_option("--out", scan.out, "CSV of report rows");
  s->add_option("--violations", scan.violations, "directory for offending states");
  add_optimizer_flags(s, scan.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (c->parsed()) return run_compute(compute);
    if (r->parsed()) return run_reproduce(target, reproduce_common, reproduce_out);
    if (s->parsed()) return run_scan(scan);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
