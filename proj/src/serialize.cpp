#include "qfano/serialize.hpp"

#include <algorithm>

namespace qfano {

namespace {

std::string join_ints(const std::vector<int>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Pipes inside markdown cells would split the cell.
std::string md_cell(std::string s) {
  std::string out;
  for (const char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

template <typename V>
ordered_json keyed(const std::map<int, V>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

ordered_json compare_json(const CompareReport& report, const std::vector<CandidateRow>& computed) {
  ordered_json j;
  j["ok"] = report.ok();
  ordered_json matched = ordered_json::array();
  for (const auto& m : report.matched) matched.push_back({{"number", m.number}, {"row", to_json(computed[m.computed])}});
  ordered_json missing = ordered_json::array();
  for (const auto& m : report.missing) missing.push_back({{"number", m.number}, {"reason", m.reason}});
  ordered_json surplus = ordered_json::array();
  for (const auto i : report.surplus) surplus.push_back(to_json(computed[i]));
  j["matched_count"] = report.matched.size();
  j["missing_count"] = report.missing.size();
  j["surplus_count"] = report.surplus.size();
  j["matched"] = std::move(matched);
  j["missing"] = std::move(missing);
  j["surplus"] = std::move(surplus);
  return j;
}

std::string candidate_md_line(const CandidateRow& r) {
  std::string line = "| " + std::to_string(r.type.q) + " | " + format_indices(r.indices()) + " | " +
                     r.type.basket.str() + " | " + r.type.A3.str() + " | " + r.type.c1cubed.str() + " | " +
                     r.type.c2c1.str() + " | " + r.type.bX.str() + " | " + r.type.bX.truncated_decimal(4) + " | " +
                     join_ints(r.type.dims, ", ") + " |";
  return line;
}

const char* kCandidateHead =
    "| q | R_X | basket | A^3 | c1^3 | c2c1 | b_X | b_X ~ | dim\\|kA\\|, k = 1.. |\n"
    "|---|---|---|---|---|---|---|---|---|\n";

}  // namespace

ordered_json to_json(const Rational& r) { return r.str(); }

ordered_json to_json(const Basket& b) {
  ordered_json j = ordered_json::array();
  for (const auto& p : b.points()) j.push_back({p.r, p.b});
  return j;
}

ordered_json to_json(const FanoNumericalType& nt) {
  ordered_json j;
  j["q"] = nt.q;
  j["indices"] = nt.basket.indices();
  j["basket"] = to_json(nt.basket);
  j["A3"] = to_json(nt.A3);
  j["c1cubed"] = to_json(nt.c1cubed);
  j["c2c1"] = to_json(nt.c2c1);
  j["bX"] = to_json(nt.bX);
  j["bx_approx"] = nt.bX.truncated_decimal(4);
  j["dims"] = nt.dims;
  return j;
}

ordered_json to_json(const CandidateRow& row) {
  ordered_json j = to_json(row.type);
  ordered_json alts = ordered_json::array();
  for (const auto& b : row.alternates) alts.push_back(to_json(b));
  j["alternates"] = std::move(alts);
  j["filters"] = row.filters;
  j["b_ambiguous"] = row.b_ambiguous;
  return j;
}

ordered_json to_json(const CheckReport& report) {
  ordered_json j;
  j["check"] = report.check;
  j["pass"] = report.pass();
  j["failures"] = report.failures();
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json x{{"number", r.number}, {"pass", r.pass}};
    if (!r.detail.empty()) x["detail"] = r.detail;
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return j;
}

ordered_json to_json(const CaseSolution& c) {
  ordered_json j;
  j["q_hat"] = c.q_hat;
  j["e"] = c.e;
  j["s"] = keyed(c.s);
  j["m"] = keyed(c.m);
  ordered_json opts = ordered_json::object();
  for (const auto& [k, list] : c.options) {
    ordered_json arr = ordered_json::array();
    for (const auto& [s, m] : list) arr.push_back({s, m});
    opts[std::to_string(k)] = std::move(arr);
  }
  j["options"] = std::move(opts);
  if (c.alpha) j["alpha"] = *c.alpha;
  if (c.beta) j["beta"] = *c.beta;
  j["torsion_free_required"] = c.torsion_free_required;
  j["d_constraint"] = c.d_constraint;
  j["status"] = std::string(status_name(c.status));
  j["reason"] = c.reason;
  ordered_json branches = ordered_json::array();
  for (const auto& b : c.branches) {
    branches.push_back({{"kind", std::string(branch_name(b.kind))},
                        {"verdict", std::string(status_name(b.verdict))},
                        {"reason", b.reason},
                        {"candidates", b.candidates}});
  }
  j["branches"] = std::move(branches);
  j["metadata"] = c.metadata;
  j["trace"] = c.trace;
  return j;
}

ordered_json to_json(const Family& f) {
  ordered_json j;
  j["label"] = f.label;
  j["offset"] = f.offset;
  j["e_min"] = f.e_min;
  j["e_max"] = f.e_max;
  j["s_values"] = f.s_values;
  j["members"] = f.members;
  return j;
}

ordered_json config_json(const SearchConfig& config) {
  ordered_json j;
  j["q_set"] = config.q_set;
  j["bx_min"] = config.bx_min ? to_json(*config.bx_min) : ordered_json(nullptr);
  j["bx_max"] = config.bx_max_strict ? to_json(*config.bx_max_strict) : ordered_json(nullptr);
  j["clubsuit"] = config.apply_clubsuit;
  j["kmax"] = config.kmax_dims;
  return j;
}

ordered_json enumerate_document(const SearchConfig& config, const std::vector<CandidateRow>& rows) {
  ordered_json j;
  j["command"] = "enumerate";
  // jobs is left out on purpose: output must not depend on it.
  j["config"] = config_json(config);
  j["count"] = rows.size();
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  j["rows"] = std::move(arr);
  return j;
}

ordered_json chi_document(int q, const Basket& basket, const Rational& A3, const std::vector<int>& ts) {
  ordered_json j;
  j["command"] = "chi";
  j["q"] = q;
  j["basket"] = to_json(basket);
  j["A3"] = to_json(A3);
  const auto c2 = c2c1_from_basket(basket);
  ordered_json values = ordered_json::array();
  for (const int t : ts) values.push_back({{"t", t}, {"chi", to_json(chi(q, basket, A3, c2, t))}});
  j["values"] = std::move(values);
  return j;
}

ordered_json analysis_document(const LinkContext& ctx, const LinkAnalysis& analysis) {
  ordered_json j;
  j["command"] = "sarkisov";
  ordered_json in;
  in["q"] = ctx.nt.q;
  in["basket"] = to_json(ctx.nt.basket);
  in["center"] = ctx.center.str();
  in["movable"] = ctx.k0;
  in["drive_k"] = analysis.drive_k;
  j["input"] = std::move(in);

  ordered_json cx;
  cx["A3"] = to_json(ctx.nt.A3);
  cx["dims"] = ctx.nt.dims;
  cx["alpha"] = ctx.alpha_symbolic ? ordered_json("integer >= 1") : to_json(ctx.alpha);
  cx["t"] = keyed(ctx.t);
  cx["beta_floor"] = {{"t_star", ctx.beta_floor.t_star},
                      {"witness_r", ctx.beta_floor.witness_r},
                      {"value", ctx.alpha_symbolic ? std::to_string(ctx.beta_floor.t_star) + " alpha"
                                                   : ctx.beta_floor.value.str()}};
  j["context"] = std::move(cx);

  ordered_json cases = ordered_json::array();
  for (const auto& c : analysis.cases) cases.push_back(to_json(c));
  j["cases"] = std::move(cases);
  ordered_json fams = ordered_json::array();
  for (const auto& f : analysis.families) fams.push_back(to_json(f));
  j["families"] = std::move(fams);
  j["trace"] = analysis.trace;
  return j;
}

ordered_json verify_document(const GoldenTable& table, const std::string& source,
                             const std::vector<CandidateRow>& computed, const CompareReport* report,
                             const std::vector<CheckReport>& checks) {
  ordered_json j;
  j["command"] = "verify";
  j["table"] = table.name;
  j["title"] = table.title;
  j["rows"] = table.rows.size();
  bool ok = true;
  ordered_json cs = ordered_json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass();
    cs.push_back(to_json(c));
  }
  j["checks"] = std::move(cs);
  if (report) {
    ok = ok && report->ok();
    ordered_json cmp = compare_json(*report, computed);
    cmp["source"] = source;
    j["compare"] = std::move(cmp);
  } else {
    j["compare"] = nullptr;
  }
  j["ok"] = ok;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string candidates_csv(const std::vector<CandidateRow>& rows) {
  std::size_t nd = 0;
  for (const auto& r : rows) nd = std::max(nd, r.type.dims.size());
  std::string out = "q,R_X,basket,A3,c1cubed,c2c1,bX,bx_approx";
  for (std::size_t k = 1; k <= nd; ++k) out += ",dim" + std::to_string(k);
  out += ",alternates,b_ambiguous\n";
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.type.q), format_indices(r.indices()), r.type.basket.str(),
                                   r.type.A3.str(), r.type.c1cubed.str(), r.type.c2c1.str(), r.type.bX.str(),
                                   r.type.bX.truncated_decimal(4)};
    for (std::size_t k = 0; k < nd; ++k) cells.push_back(k < r.type.dims.size() ? std::to_string(r.type.dims[k]) : "");
    std::string alts;
    for (const auto& b : r.alternates) alts += (alts.empty() ? "" : ";") + b.str();
    cells.push_back(alts);
    cells.push_back(r.b_ambiguous ? "1" : "0");
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
    out += "\n";
  }
  return out;
}

std::string candidates_markdown(const std::vector<CandidateRow>& rows) {
  std::string out = kCandidateHead;
  for (const auto& r : rows) out += candidate_md_line(r) + "\n";
  out += "\n" + std::to_string(rows.size()) + " rows\n";
  return out;
}

std::string analysis_markdown(const LinkContext& ctx, const LinkAnalysis& analysis, bool with_trace) {
  const int k = analysis.drive_k;
  std::string out = "## q = " + std::to_string(ctx.nt.q) + ", basket " + ctx.nt.basket.str() + ", centre " +
                    ctx.center.str() + ", movable " + std::to_string(ctx.k0) + "A, drive k = " + std::to_string(k) +
                    "\n\n";
  if (with_trace) {
    for (const auto& line : analysis.trace) out += "    " + line + "\n";
    out += "\n";
  }
  if (analysis.cases.empty()) {
    out += "No admissible case.\n";
    return out;
  }
  out += "### Families\n\n";
  for (const auto& f : analysis.families) out += "- " + f.label + "\n";
  out += "\n### Cases\n\n| qhat | e | s_" + std::to_string(k) + " | m_" + std::to_string(k) +
         " | status | reason |\n|---|---|---|---|---|---|\n";
  for (const auto& c : analysis.cases) {
    out += "| " + std::to_string(c.q_hat) + " | " + std::to_string(c.e) + " | " + std::to_string(c.s.at(k)) + " | " +
           std::to_string(c.m.at(k)) + " | " + std::string(status_name(c.status)) + " | " + md_cell(c.reason) + " |\n";
  }
  if (with_trace) {
    for (const auto& c : analysis.cases) {
      out += "\n#### (" + std::to_string(c.q_hat) + ", " + std::to_string(c.e) + ", " + std::to_string(c.s.at(k)) +
             ")\n\n";
      for (const auto& line : c.trace) out += "    " + line + "\n";
      for (const auto& m : c.metadata) out += "    note: " + m + "\n";
    }
  }
  return out;
}

std::string verify_markdown(const GoldenTable& table, const std::string& source,
                            const std::vector<CandidateRow>& computed, const CompareReport* report,
                            const std::vector<CheckReport>& checks) {
  std::string out = "# " + table.name + ": " + table.title + "\n\n";
  for (const auto& c : checks) {
    out += "- " + c.check + ": " + (c.pass() ? "pass" : "FAIL") + " (" + std::to_string(c.rows.size() - c.failures()) +
           "/" + std::to_string(c.rows.size()) + " rows)\n";
    for (const auto& r : c.rows) {
      if (!r.pass) out += "  - row " + std::to_string(r.number) + ": " + r.detail + "\n";
    }
  }
  if (!report) return out;
  out += "\nComputed rows: " + source + "\n\n";
  out += "Matched " + std::to_string(report->matched.size()) + ", missing " + std::to_string(report->missing.size()) +
         ", surplus " + std::to_string(report->surplus.size()) + ".\n\n";
  if (!report->matched.empty()) {
    out += "## Matched\n\n| No. | q | R_X | basket | A^3 | c1^3 | c2c1 | b_X | b_X ~ | dim\\|kA\\|, k = 1.. |\n"
           "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& m : report->matched) {
      out += "| " + std::to_string(m.number) + " " + candidate_md_line(computed[m.computed]) + "\n";
    }
  }
  if (!report->missing.empty()) {
    out += "\n## Missing\n\n";
    for (const auto& m : report->missing) out += "- row " + std::to_string(m.number) + ": " + m.reason + "\n";
  }
  out += "\n## Surplus\n\n";
  if (report->surplus.empty()) {
    out += "None.\n";
  } else {
    out += kCandidateHead;
    for (const auto i : report->surplus) out += candidate_md_line(computed[i]) + "\n";
  }
  return out;
}

}  // namespace qfano
