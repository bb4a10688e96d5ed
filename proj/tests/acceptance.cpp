// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/core.h>

#include "oracle.hpp"
#include "qfano/enumerator.hpp"
#include "qfano/orbifold_rr.hpp"
#include "qfano/sarkisov.hpp"
#include "qfano/tables.hpp"

using namespace qfano;

namespace {

const std::filesystem::path kFixtures{QFANO_FIXTURES_DIR};
std::string g_cli;
int g_failed = 0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

void criterion(const char* id, const char* name, const std::function<Outcome()>& body, double limit_s = 0) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && s >= limit_s) o.require(false, fmt::format("took {:.2f} s, limit {} s", s, limit_s));
  if (!o.pass) ++g_failed;
  fmt::print("{} {:<3} {} [{:.3f} s]{}{}\n", o.pass ? "PASS" : "FAIL", id, name, s, o.detail.empty() ? "" : ": ",
             o.detail);
  std::fflush(stdout);
}

std::string run_cli(const std::string& args, int* status = nullptr) {
  const std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int rc = pclose(p);
  if (status != nullptr) *status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

TargetTables& tables() {
  static TargetTables t(load_table("T1", kFixtures));
  return t;
}

FanoNumericalType q4() { return FanoNumericalType::from_basket(4, parse_basket("7:2,13:6"), 12); }
FanoNumericalType q8() { return FanoNumericalType::from_basket(8, parse_basket("3:1,5:2,11:4"), 12); }

LinkAnalysis analyze(const FanoNumericalType& nt, int k0, const char* centre, int drive) {
  AnalyzeOptions opt;
  opt.drive_k = drive;
  return analyze_link(LinkContext::make(nt, k0, Center::parse(centre)), opt, tables());
}

std::vector<std::string> labels(const LinkAnalysis& a) {
  std::vector<std::string> out;
  for (const auto& f : a.families) out.push_back(f.label);
  return out;
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " | ") + x;
  return s;
}

bool same_rows(const CandidateRow& row, int q, std::vector<int> indices, const Rational& bX) {
  return row.type.q == q && row.indices() == indices && row.type.bX == bX;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];
  }
  if (g_cli.empty()) {
    fmt::print(stderr, "usage: acceptance --cli PATH\n");
    return 2;
  }

  criterion("1", "c2c1 from the basket reproduces every row of A1 and A2", [] {
    Outcome o;
    std::size_t n = 0;
    for (const char* name : {"A1", "A2"}) {
      for (const auto& row : load_table(name, kFixtures).rows) {
        // c2c1 depends on the indices only, so any twist assignment will do.
        const auto b = baskets_with_indices(row.indices).front();
        o.require(row.c2c1.has_value() && c2c1_from_basket(b) == *row.c2c1,
                  fmt::format("{} row {}", name, row.number));
        ++n;
      }
    }
    o.require(n == 41, fmt::format("{} rows", n));
    const auto a1 = load_table("A1", kFixtures).rows.at(21);
    o.require(c2c1_from_basket(baskets_with_indices(a1.indices).front()) == Rational(928, 165), "A1-22");
    const auto a2 = load_table("A2", kFixtures).rows.at(0);
    o.require(c2c1_from_basket(baskets_with_indices(a2.indices).front()) == Rational(15, 2), "A2-1");
    if (o.pass) o.detail = fmt::format("{} rows", n);
    return o;
  }, 1.0);

  criterion("2", "clubsuit search above 121/41 gives exactly four candidates", [] {
    Outcome o;
    SearchConfig cfg;
    cfg.apply_clubsuit = true;
    cfg.bx_min = Rational(121, 41);
    const auto rows = enumerate_candidates(cfg);
    o.require(rows.size() == 4, fmt::format("{} rows", rows.size()));
    if (rows.size() == 4) {
      o.require(same_rows(rows[0], 4, {7, 13}, Rational(3)), "row 1");
      o.require(same_rows(rows[1], 5, {3, 7, 7}, Rational(25, 8)), "row 2");
      o.require(same_rows(rows[2], 5, {4, 7}, Rational(3)), "row 3");
      o.require(same_rows(rows[3], 11, {2, 3, 5}, Rational(121, 41)), "row 4");
    }
    const auto rep = compare(load_table("L2.2", kFixtures), rows);
    o.require(rep.missing.empty() && rep.surplus.empty() && rep.matched.size() == 4,
              fmt::format("missing {}, surplus {}", rep.missing.size(), rep.surplus.size()));
    if (o.pass) o.detail = "matched 4, missing 0, surplus 0";
    return o;
  });

  criterion("3", "A1 reproduced from the search with q >= 6 and b_X < 3", [] {
    Outcome o;
    SearchConfig cfg;
    cfg.q_set = {6, 7, 8, 9, 11, 13, 17, 19};
    cfg.bx_max_strict = Rational(3);
    const auto rows = enumerate_candidates(cfg);
    const auto rep = compare(load_table("A1", kFixtures), rows);
    o.require(rep.matched.size() == 31, fmt::format("matched {}", rep.matched.size()));
    for (const auto& m : rep.missing) o.require(false, fmt::format("row {} missing: {}", m.number, m.reason));
    std::string surplus;
    for (const auto i : rep.surplus) {
      surplus += fmt::format(" q={} {}", rows[i].type.q, format_indices(rows[i].indices()));
    }
    if (o.pass) o.detail = fmt::format("matched 31 of {} computed, surplus {}{}", rows.size(), rep.surplus.size(), surplus);
    return o;
  });

  criterion("4", "invariants of the q=4, q=8 and q=5 types", [] {
    Outcome o;
    const auto a = q4();
    o.require(a.A3 == Rational(18, 91) && a.c1cubed == Rational(1152, 91) && a.c2c1 == Rational(384, 91) &&
                  a.bX == Rational(3),
              "q=4 invariants");
    o.require(std::vector<int>(a.dims.begin(), a.dims.begin() + 4) == std::vector<int>{-1, 1, 3, 6}, "q=4 dims");
    const auto b = q8();
    o.require(b.A3 == Rational(4, 165) && b.c1cubed == Rational(2048, 165) && b.c2c1 == Rational(928, 165),
              "q=8 invariants");
    o.require(std::vector<int>(b.dims.begin(), b.dims.begin() + 6) == std::vector<int>{-1, 0, 0, 1, 2, 3}, "q=8 dims");
    const auto c = FanoNumericalType::from_basket(5, parse_basket("3:1,7:2,7:3"));
    o.require(c.c1cubed == Rational(500, 21) && c.c2c1 == Rational(160, 21) && c.bX == Rational(25, 8),
              "q=5 invariants");
    return o;
  });

  criterion("5", "RR identities on every candidate and c_Q against the literal sum", [] {
    Outcome o;
    SearchConfig cfg;
    const auto rows = enumerate_candidates(cfg);
    std::size_t types = 0;
    for (const auto& row : rows) {
      std::vector<Basket> all{row.type.basket};
      all.insert(all.end(), row.alternates.begin(), row.alternates.end());
      for (const auto& b : all) {
        const auto nt = FanoNumericalType::with_degree(row.type.q, b, row.type.A3, 1);
        const int q = nt.q;
        bool ok = chi(nt, 0) == Rational(1) && chi(nt, -q) == Rational(-1);
        for (int t = -q + 1; t < 0; ++t) ok = ok && chi(nt, t) == Rational(0);
        o.require(ok, fmt::format("q={} {}", q, b.str()));
        ++types;
      }
    }
    std::size_t n = 0;
    for (int r = 2; r <= 30; ++r) {
      for (int b = 1; 2 * b <= r; ++b) {
        if (std::gcd(r, b) != 1) continue;
        for (int q = 1; q <= 19; ++q) {
          if (std::gcd(q, r) != 1) continue;
          for (int t = -2 * q; t <= 2 * q; ++t) {
            const auto want = oracle::c_Q(r, b, q, t);
            const auto got = c_Q({r, b}, q, t);
            if (got != Rational(boost::multiprecision::numerator(want), boost::multiprecision::denominator(want))) {
              o.require(false, fmt::format("c_Q r={} b={} q={} t={}", r, b, q, t));
            }
            ++n;
          }
        }
      }
    }
    if (o.pass) o.detail = fmt::format("{} candidate rows, {} baskets, {} c_Q values", rows.size(), types, n);
    return o;
  });

  criterion("6", "foliation threshold and the q=5 equality case", [] {
    Outcome o;
    o.require(foliation_threshold(3, 5, 4) == Rational(40), "threshold");
    const auto c = FanoNumericalType::from_basket(5, parse_basket("3:1,7:2,7:3"));
    const Rational rhs = Rational(40) * c.A3;
    o.require(!(c.c2c1 > rhs), "strict inequality holds");
    o.require(c.c2c1 == rhs && rhs == Rational(160, 21), "no equality");
    if (o.pass) o.detail = fmt::format("{} = {}", c.c2c1.str(), rhs.str());
    return o;
  });

  criterion("7a", "q=4, centre of index 13: five families", [] {
    Outcome o;
    const auto a = analyze(q4(), 3, "index:13", 3);
    const std::vector<std::string> want{"qhat = 3, e = 1, 0 <= s_3 <= 1", "qhat = 6, e = 2, s_3 = 2",
                                        "qhat = 7, e = 1, 1 <= s_3 <= 4", "qhat = 13, e = 3, s_3 = 6",
                                        "qhat = 17, e = 3, s_3 = 9"};
    o.require(labels(a) == want, joined(labels(a)));
    return o;
  }, 1.0);

  criterion("7b", "q=4, centre of index 7: six families", [] {
    Outcome o;
    const auto a = analyze(q4(), 3, "index:7", 3);
    const std::vector<std::string> want{"qhat = e, 1 <= e <= 3, s_3 = 0", "qhat = 4+e, 1 <= e <= 4, 1 <= s_3 <= 3",
                                        "qhat = 11, e = 3, s_3 = 6",      "qhat = 13, e = 5, s_3 = 6",
                                        "qhat = 17, e = 5, s_3 = 9",      "qhat = 19, e = 3, s_3 = 12"};
    o.require(labels(a) == want, joined(labels(a)));
    return o;
  }, 1.0);

  criterion("7c", "curve and Gorenstein centres give no case", [] {
    Outcome o;
    for (const char* centre : {"curve", "gorenstein"}) {
      const auto a = analyze(q4(), 3, centre, 0);
      o.require(a.cases.empty(), fmt::format("q=4 {}", centre));
      o.require(std::find(a.trace.begin(), a.trace.end(),
                          "qhat >= 4: birational, s_3 >= 1 as dim|3A| = 3, so qhat >= 9") != a.trace.end(),
                fmt::format("q=4 {} bound", centre));
      const auto b = analyze(q8(), 4, centre, 0);
      o.require(b.cases.empty(), fmt::format("q=8 {}", centre));
      o.require(std::find(b.trace.begin(), b.trace.end(), "qhat >= 24 > 19: no admissible Fano index") !=
                    b.trace.end(),
                fmt::format("q=8 {} bound", centre));
    }
    return o;
  }, 1.0);

  criterion("7d", "q=8, centre of index 11, drive k=3", [] {
    Outcome o;
    const auto a = analyze(q8(), 4, "index:11", 3);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& c : a.cases) {
      if (pairs.empty() || pairs.back() != std::pair{c.q_hat, c.e}) pairs.emplace_back(c.q_hat, c.e);
    }
    o.require(pairs == std::vector<std::pair<int, int>>{{5, 1}, {7, 3}, {17, 5}}, joined(labels(a)));
    return o;
  }, 1.0);

  criterion("7e", "q=8, centre of index 5: list and exclusion at k=3", [] {
    Outcome o;
    const auto a = analyze(q8(), 4, "index:5", 4);
    std::vector<std::tuple<int, int, int>> got;
    for (const auto& c : a.cases) got.emplace_back(c.q_hat, c.e, c.s.at(4));
    o.require(got == std::vector<std::tuple<int, int, int>>{{3, 1, 0}, {5, 1, 1}, {7, 1, 1}, {7, 1, 2}},
              joined(labels(a)));
    const auto ctx = LinkContext::make(q8(), 4, Center::parse("index:5"));
    for (const auto& c : key_equality_cases(ctx, 4, tables())) {
      if (c.q_hat != 5 && c.q_hat != 7) continue;
      const auto r = refine_case(c, ctx, 3, tables());
      o.require(r.status == CaseStatus::Excluded, fmt::format("qhat = {} survives k = 3", c.q_hat));
    }
    for (const auto& c : a.cases) {
      if (c.q_hat == 3) o.require(c.status == CaseStatus::Survivor, "qhat = 3 not a survivor");
    }
    return o;
  }, 1.0);

  criterion("7f", "refinement facts: s_2 = 4 and the gamma relations", [] {
    Outcome o;
    const auto ctx = LinkContext::make(q4(), 3, Center::parse("index:7"));
    bool seen = false;
    for (const auto& c : key_equality_cases(ctx, 3, tables())) {
      if (c.q_hat != 13 || c.e != 5) continue;
      seen = true;
      const auto r = refine_case(c, ctx, 2, tables());
      o.require(r.s.count(2) == 1 && r.s.at(2) == 4, "s_2 for (13, 5)");
    }
    o.require(seen, "no (13, 5) case");
    o.require(gamma_relation(2, 1).str() == "(c-2)/7", "gamma_2 = " + gamma_relation(2, 1).str());
    for (const auto& c : {Rational(1), Rational(5, 3), Rational(-2, 7), Rational(9, 2)}) {
      const Rational g2 = gamma_relation(c, 2, 1);
      o.require(gamma_relation(c, 4, 2) == Rational(2) * g2, "gamma_4 = 2 gamma_2");
      o.require(gamma_relation(c, 6, 3) == Rational(3) * g2, "gamma_6 = 3 gamma_2");
    }
    // The subcase itself: s_2 = 1, s_4 = 2 for (qhat, e) = (7, 3) at the index-11 point.
    const auto a = analyze(q8(), 4, "index:11", 3);
    bool sub = false;
    for (const auto& c : a.cases) {
      if (c.q_hat == 7 && c.e == 3 && c.s.count(2) && c.s.count(4)) sub = sub || (c.s.at(2) == 1 && c.s.at(4) == 2);
    }
    o.require(sub, "(7, 3) subcase with s_2 = 1, s_4 = 2");
    return o;
  }, 1.0);

  criterion("8", "command output is byte-identical across runs and worker counts", [] {
    Outcome o;
    const std::vector<std::pair<std::string, std::vector<std::string>>> groups{
        {"criterion 2",
         {"enumerate --clubsuit --bx-min 121/41 --format json --jobs 1",
          "enumerate --clubsuit --bx-min 121/41 --format json --jobs 1",
          "enumerate --clubsuit --bx-min 121/41 --format json --jobs 8"}},
        {"criterion 2 verify",
         {"verify --table L2.2 --format json --jobs 1", "verify --table L2.2 --format json --jobs 8"}},
        {"criterion 3",
         {"verify --table A1 --format json --jobs 1", "verify --table A1 --format json --jobs 1",
          "verify --table A1 --format json --jobs 8"}},
        {"criterion 3 search",
         {"enumerate --q-min 6 --bx-max 3 --format csv --jobs 1", "enumerate --q-min 6 --bx-max 3 --format csv --jobs 8"}},
    };
    std::vector<std::pair<std::string, std::vector<std::string>>> all = groups;
    const char* contexts[] = {
        "--q 4 --basket 7:2,13:6 --center index:13 --movable 3 --drive-k 3",
        "--q 4 --basket 7:2,13:6 --center index:7 --movable 3 --drive-k 3",
        "--q 4 --basket 7:2,13:6 --center curve --movable 3",
        "--q 8 --basket 3:1,5:2,11:4 --center gorenstein --movable 4",
        "--q 8 --basket 3:1,5:2,11:4 --center index:11 --movable 4 --drive-k 3",
        "--q 8 --basket 3:1,5:2,11:4 --center index:5 --movable 4 --drive-k 4",
    };
    for (const char* ctx : contexts) {
      const std::string cmd = std::string("sarkisov ") + ctx + " --trace --format json";
      all.push_back({fmt::format("sarkisov {}", ctx), {cmd, cmd}});
    }
    std::size_t runs = 0;
    for (const auto& [label, cmds] : all) {
      int rc0 = -1;
      const auto first = run_cli(cmds.front(), &rc0);
      o.require(rc0 == 0 && !first.empty(), label + ": exit " + std::to_string(rc0));
      for (std::size_t i = 1; i < cmds.size(); ++i) {
        int rc = -1;
        o.require(run_cli(cmds[i], &rc) == first && rc == rc0, label + ": output differs");
      }
      runs += cmds.size();
    }
    if (o.pass) o.detail = fmt::format("{} invocations", runs);
    return o;
  });

  fmt::print("{} of 14 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
