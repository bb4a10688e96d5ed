// qfano: command-line front end.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage or input error.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ranges.h>

#include "qfano/enumerator.hpp"
#include "qfano/errors.hpp"
#include "qfano/orbifold_rr.hpp"
#include "qfano/sarkisov.hpp"
#include "qfano/serialize.hpp"
#include "qfano/tables.hpp"

#ifndef QFANO_FIXTURES_DIR
#define QFANO_FIXTURES_DIR ""
#endif

namespace fs = std::filesystem;
using namespace qfano;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

fs::path find_fixtures(const std::string& flag) {
  if (!flag.empty()) {
    if (!fs::is_directory(flag)) throw UsageError("--fixtures: '" + flag + "' is not a directory");
    return flag;
  }
  std::vector<fs::path> tries;
  std::error_code ec;
  const auto exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const auto dir = exe.parent_path();
    tries = {dir / "fixtures", dir / ".." / "share" / "qfano" / "fixtures", dir / ".." / "fixtures",
             dir / ".." / ".." / "fixtures"};
  }
  if (*QFANO_FIXTURES_DIR) tries.emplace_back(QFANO_FIXTURES_DIR);
  for (const auto& p : tries) {
    if (fs::exists(p / "A1.json")) return fs::weakly_canonical(p);
  }
  throw UsageError("fixture directory not found; pass --fixtures DIR");
}

Basket single_basket(const std::string& text) {
  const auto all = parse_basket_or_indices(text);
  if (all.size() != 1) {
    throw UsageError("--basket '" + text + "' has " + std::to_string(all.size()) +
                     " twist assignments; give the full r:b form");
  }
  return all.front();
}

FanoNumericalType make_type(int q, const Basket& b, const std::optional<std::string>& a3, int kmax) {
  if (a3) return FanoNumericalType::with_degree(q, b, Rational::parse(*a3), kmax);
  return FanoNumericalType::from_basket(q, b, kmax);
}

void print(const std::string& s) { std::cout << s << std::flush; }

// ---- enumerate -------------------------------------------------------------

struct EnumerateArgs {
  std::optional<int> q_min, q_max;
  std::vector<int> q_set;
  std::optional<std::string> bx_min, bx_max;
  bool clubsuit = false;
  int kmax = 9;
  std::string format = "json";
  int jobs = 1;
};

int run_enumerate(const EnumerateArgs& a) {
  SearchConfig cfg;
  if (!a.q_set.empty()) cfg.q_set = a.q_set;
  std::erase_if(cfg.q_set, [&](int q) { return (a.q_min && q < *a.q_min) || (a.q_max && q > *a.q_max); });
  if (cfg.q_set.empty()) throw UsageError("no Fano index left after --q-min/--q-max/--q-set");
  if (a.bx_min) cfg.bx_min = Rational::parse(*a.bx_min);
  if (a.bx_max) cfg.bx_max_strict = Rational::parse(*a.bx_max);
  cfg.apply_clubsuit = a.clubsuit;
  cfg.kmax_dims = a.kmax;
  cfg.jobs = a.jobs;
  cfg.validate();
  const auto rows = enumerate_candidates(cfg);
  if (a.format == "json") {
    print(dump(enumerate_document(cfg, rows)));
  } else if (a.format == "csv") {
    print(candidates_csv(rows));
  } else {
    print(candidates_markdown(rows));
  }
  return 0;
}

// ---- chi / dims ------------------------------------------------------------

struct TypeArgs {
  int q = 0;
  std::string basket;
  std::optional<std::string> a3;
  std::vector<int> t;
  int kmax = 9;
  std::string format = "text";
};

// chi needs only the degree, so inconsistent twist assignments still evaluate.
Rational degree(int q, const Basket& b, const std::optional<std::string>& a3) {
  return a3 ? Rational::parse(*a3) : A3_from(q, b, c2c1_from_basket(b));
}

int run_chi(const TypeArgs& a) {
  const auto baskets = parse_basket_or_indices(a.basket);
  if (a.format == "json") {
    ordered_json out = ordered_json::array();
    for (const auto& b : baskets) out.push_back(chi_document(a.q, b, degree(a.q, b, a.a3), a.t));
    print(dump(baskets.size() == 1 ? out.front() : out));
    return 0;
  }
  const bool bare = baskets.size() == 1 && a.t.size() == 1;
  for (const auto& b : baskets) {
    const auto A3 = degree(a.q, b, a.a3);
    const auto c2 = c2c1_from_basket(b);
    for (const int t : a.t) {
      const auto v = chi(a.q, b, A3, c2, t);
      if (bare) {
        fmt::print("{}\n", v.str());
      } else {
        fmt::print("{} t={} {}\n", b.str(), t, v.str());
      }
    }
  }
  return 0;
}

int run_dims(const TypeArgs& a) {
  const auto baskets = parse_basket_or_indices(a.basket);
  ordered_json docs = ordered_json::array();
  for (const auto& b : baskets) {
    FanoNumericalType nt;
    try {
      nt = make_type(a.q, b, a.a3, a.kmax);
    } catch (const InconsistentTypeError& e) {
      // Only fatal when the user named a single basket.
      if (baskets.size() == 1) throw;
      if (a.format == "json") {
        docs.push_back({{"q", a.q}, {"basket", to_json(b)}, {"error", e.what()}});
      } else {
        fmt::print("q = {}, basket {}: inconsistent ({})\n", a.q, b.str(), e.what());
      }
      continue;
    }
    const auto van = check_vanishing(nt);
    const auto integ = check_integrality(nt.q, nt.basket, nt.A3);
    if (a.format == "json") {
      auto j = to_json(nt);
      j["vanishing"] = van.pass;
      j["integrality"] = integ.pass;
      docs.push_back(std::move(j));
      continue;
    }
    fmt::print("q = {}, basket {}\n", nt.q, b.str());
    fmt::print("  A^3 = {}, c1^3 = {}, c2c1 = {}, b_X = {} ~ {}\n", nt.A3.str(), nt.c1cubed.str(), nt.c2c1.str(),
               nt.bX.str(), nt.bX.truncated_decimal(4));
    fmt::print("  dim|kA|, k = 1..{}: {}\n", nt.dims.size(), fmt::join(nt.dims, " "));
    fmt::print("  vanishing: {}", van.pass ? "pass" : "fail");
    if (van.failing_t) fmt::print(" (chi({}A) != 0)", *van.failing_t);
    fmt::print(", integrality: {}", integ.pass ? "pass" : "fail");
    if (!integ.pass) fmt::print(" ({})", fmt::join(integ.reasons, "; "));
    fmt::print("\n");
  }
  if (a.format == "json") print(dump(docs.size() == 1 ? docs.front() : docs));
  return 0;
}

// ---- sarkisov --------------------------------------------------------------

struct SarkisovArgs {
  int q = 0;
  std::string basket;
  std::string center;
  int movable = 0;
  int drive_k = 0;
  std::vector<int> refine;
  int refine_kmax = 6;
  bool no_auto_refine = false;
  bool trace = false;
  std::string format = "json";
};

int run_sarkisov(const SarkisovArgs& a, const fs::path& fixtures) {
  const auto nt = FanoNumericalType::from_basket(a.q, single_basket(a.basket), 12);
  const auto center = Center::parse(a.center);
  const int kmax = std::max({12, a.drive_k, a.refine_kmax, a.refine.empty() ? 0 : *std::max_element(a.refine.begin(), a.refine.end())});
  const auto ctx = LinkContext::make(nt, a.movable, center, kmax);
  TargetTables tables(load_table("T1", fixtures));
  AnalyzeOptions opt;
  opt.drive_k = a.drive_k;
  opt.refine = a.refine;
  opt.refine_kmax = a.refine_kmax;
  opt.auto_refine = !a.no_auto_refine;
  const auto analysis = analyze_link(ctx, opt, tables);
  if (a.format == "json") {
    auto doc = analysis_document(ctx, analysis);
    if (!a.trace) {
      // Traces are always computed; without --trace only the case-level
      // status survives in the output.
      doc["trace"] = ordered_json::array();
      for (auto& c : doc["cases"]) c["trace"] = ordered_json::array();
    }
    print(dump(doc));
  } else {
    print(analysis_markdown(ctx, analysis, a.trace));
  }
  return 0;
}

// ---- verify / export -------------------------------------------------------

struct TableArgs {
  std::string table;
  std::string format;
  int jobs = 1;
};

CandidateRow row_from_type(FanoNumericalType nt) {
  CandidateRow r;
  r.type = std::move(nt);
  return r;
}

int run_verify(const TableArgs& a, const fs::path& fixtures) {
  const auto table = load_table(a.table, fixtures);
  std::vector<CheckReport> checks{verify_eq_range(table), verify_display(table)};
  std::vector<CandidateRow> computed;
  std::optional<CompareReport> report;
  std::string source;

  if (table.name == "A1" || table.name == "L2.2") {
    SearchConfig cfg;
    cfg.jobs = a.jobs;
    if (table.name == "A1") {
      std::erase_if(cfg.q_set, [](int q) { return q < 6; });
      cfg.bx_max_strict = Rational(3);
      source = "enumerate --q-min 6 --bx-max 3";
    } else {
      cfg.apply_clubsuit = true;
      cfg.bx_min = Rational(121, 41);
      source = "enumerate --clubsuit --bx-min 121/41";
    }
    computed = enumerate_candidates(cfg);
    report = compare(table, computed);
  } else if (table.name == "L5.1" || table.name == "L6-q8") {
    for (const auto& row : table.rows) {
      computed.push_back(row_from_type(FanoNumericalType::from_basket(row.q, *row.basket)));
    }
    report = compare(table, computed);
    source = "Riemann-Roch from each printed basket";
  }

  const CompareReport* rp = report ? &*report : nullptr;
  if (a.format == "json") {
    print(dump(verify_document(table, source, computed, rp, checks)));
  } else {
    print(verify_markdown(table, source, computed, rp, checks));
  }
  bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass(); });
  if (report) ok = ok && report->ok();
  if (!ok) std::cerr << "qfano: verification of " << table.name << " failed\n";
  return ok ? 0 : kExitMismatch;
}

int run_export(const TableArgs& a, const fs::path& fixtures) {
  const auto table = load_table(a.table, fixtures);
  if (a.format == "json") {
    print(dump_table(table));
  } else if (a.format == "csv") {
    print(render_csv(table));
  } else {
    print(render_markdown(table));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbifold Riemann-Roch, candidate search and Sarkisov-link case analysis for Q-Fano threefolds"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string fixtures_flag;
  app.add_option("--fixtures", fixtures_flag, "Directory holding the table fixtures");

  const auto formats = [](std::vector<std::string> v) { return CLI::IsMember(std::move(v)); };
  const auto positive = CLI::PositiveNumber;

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "Search all baskets for candidate numerical types");
  enumerate->add_option("--q-min", en.q_min, "Smallest Fano index");
  enumerate->add_option("--q-max", en.q_max, "Largest Fano index");
  enumerate->add_option("--q-set", en.q_set, "Comma-separated Fano indices")->delimiter(',');
  enumerate->add_option("--bx-min", en.bx_min, "Keep b_X >= p/q");
  enumerate->add_option("--bx-max", en.bx_max, "Keep b_X < p/q");
  enumerate->add_flag("--clubsuit", en.clubsuit, "Apply the per-index upper bound on b_X");
  enumerate->add_option("--kmax", en.kmax, "Number of dim|kA| values per row")->check(positive);
  enumerate->add_option("--format", en.format)->check(formats({"json", "csv", "md"}));
  enumerate->add_option("--jobs", en.jobs, "Worker threads")->check(positive);

  TypeArgs ch;
  auto* chi_cmd = app.add_subcommand("chi", "Evaluate chi(tA)");
  chi_cmd->add_option("--q", ch.q)->required();
  chi_cmd->add_option("--basket", ch.basket, "r:b,r:b,... or r,r,... (every twist)")->required();
  chi_cmd->add_option("--t", ch.t, "Values of t, comma-separated")->required()->delimiter(',')->allow_extra_args(false);
  chi_cmd->add_option("--a3", ch.a3, "Use this A^3 instead of the degree formula");
  chi_cmd->add_option("--format", ch.format)->check(formats({"text", "json"}));

  TypeArgs di;
  auto* dims_cmd = app.add_subcommand("dims", "Numerical invariants and dim|kA|");
  dims_cmd->add_option("--q", di.q)->required();
  dims_cmd->add_option("--basket", di.basket, "r:b,r:b,... or r,r,... (every twist)")->required();
  dims_cmd->add_option("--a3", di.a3, "Use this A^3 instead of the degree formula");
  dims_cmd->add_option("--kmax", di.kmax)->check(positive);
  dims_cmd->add_option("--format", di.format)->check(formats({"text", "json"}));

  SarkisovArgs sa;
  auto* sark = app.add_subcommand("sarkisov", "Sarkisov-link case analysis");
  sark->add_option("--q", sa.q)->required();
  sark->add_option("--basket", sa.basket, "r:b,r:b,...")->required();
  sark->add_option("--center", sa.center, "curve, gorenstein or index:R")->required();
  sark->add_option("--movable", sa.movable, "k0 of the movable system |k0 A|")->required()->check(positive);
  sark->add_option("--drive-k", sa.drive_k, "k at which the key equality is enumerated (default k0)")->check(positive);
  sark->add_option("--refine-k", sa.refine, "Refinement steps, in order (repeatable)")->delimiter(',')->check(positive);
  sark->add_option("--refine-kmax", sa.refine_kmax, "Automatic refinement over k = 1..K")->check(CLI::NonNegativeNumber);
  sark->add_flag("--no-auto-refine", sa.no_auto_refine, "Skip automatic refinement");
  sark->add_flag("--trace", sa.trace, "Include the derivation trace");
  sark->add_option("--format", sa.format)->check(formats({"json", "md"}));

  TableArgs ve{"", "md", 1};
  auto* verify = app.add_subcommand("verify", "Check a stored table against the computation");
  verify->add_option("--table", ve.table)->required()->check(formats(known_tables()));
  verify->add_option("--format", ve.format)->check(formats({"json", "md"}));
  verify->add_option("--jobs", ve.jobs, "Worker threads for the search")->check(positive);

  TableArgs ex{"", "md", 1};
  auto* exp = app.add_subcommand("export", "Render a stored table");
  exp->add_option("--table", ex.table)->required()->check(formats(known_tables()));
  exp->add_option("--format", ex.format)->check(formats({"json", "csv", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*enumerate) return run_enumerate(en);
    if (*chi_cmd) return run_chi(ch);
    if (*dims_cmd) return run_dims(di);
    if (*sark) return run_sarkisov(sa, find_fixtures(fixtures_flag));
    if (*verify) return run_verify(ve, find_fixtures(fixtures_flag));
    if (*exp) return run_export(ex, find_fixtures(fixtures_flag));
  } catch (const Error& e) {
    std::cerr << "qfano: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
