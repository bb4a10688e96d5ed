#include "qfano/tables.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qfano/errors.hpp"

namespace qfano {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::map<std::string, std::size_t, std::less<>>& expected_rows() {
  static const std::map<std::string, std::size_t, std::less<>> rows{
      {"T1", 7}, {"A1", 31}, {"A2", 10}, {"L2.2", 4}, {"L5.1", 1}, {"L6-q8", 1}};
  return rows;
}

[[noreturn]] void malformed(std::string_view table, int row, const std::string& what) {
  std::string msg = "malformed fixture";
  if (!table.empty()) msg += " '" + std::string(table) + "'";
  if (row > 0) msg += " row " + std::to_string(row);
  throw FixtureError(msg + ": " + what);
}

std::vector<int> int_list(const json& j, std::string_view table, int row, const char* key) {
  if (!j.is_array()) malformed(table, row, std::string(key) + " must be an array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) malformed(table, row, std::string(key) + " must be an array of integers");
    out.push_back(v.get<int>());
  }
  return out;
}

std::optional<Rational> rational_field(const json& r, const char* key, std::string_view table, int row) {
  if (!r.contains(key)) return std::nullopt;
  const auto& v = r.at(key);
  if (!v.is_string()) malformed(table, row, std::string(key) + " must be a \"p/q\" string");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const ParseError& e) {
    malformed(table, row, e.what());
  }
}

GoldenRow parse_row(const json& r, std::string_view table) {
  GoldenRow row;
  if (!r.is_object()) malformed(table, 0, "rows must be objects");
  if (!r.contains("number") || !r.at("number").is_number_integer()) malformed(table, 0, "row without integer number");
  row.number = r.at("number").get<int>();
  const int n = row.number;
  static const std::vector<std::string> allowed{"number", "mark", "maybe_torsion", "q", "iota", "basket", "A3",
                                                "c1cubed", "c2c1", "bX", "bx_approx", "dims", "dims_twisted", "grdb"};
  for (const auto& [key, _] : r.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) malformed(table, n, "unknown key '" + key + "'");
  }
  if (!r.contains("q") || !r.at("q").is_number_integer()) malformed(table, n, "missing integer q");
  row.q = r.at("q").get<int>();
  if (r.contains("mark")) row.mark = r.at("mark").get<std::string>();
  if (r.contains("maybe_torsion")) row.maybe_torsion = r.at("maybe_torsion").get<bool>();
  if (r.contains("iota")) row.iota = r.at("iota").get<int>();

  if (!r.contains("basket") || !r.at("basket").is_array()) malformed(table, n, "missing basket array");
  const auto& b = r.at("basket");
  if (!b.empty() && b.front().is_array()) {
    std::vector<OrbifoldPoint> pts;
    for (const auto& p : b) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        malformed(table, n, "basket entries must all be [r, b] pairs");
      }
      pts.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    try {
      row.basket = Basket(std::move(pts));
    } catch (const DomainError& e) {
      malformed(table, n, e.what());
    }
    row.indices = row.basket->indices();
  } else {
    row.indices = int_list(b, table, n, "basket");
    if (std::any_of(row.indices.begin(), row.indices.end(), [](int x) { return x < 2; })) {
      malformed(table, n, "local indices must be >= 2");
    }
    std::sort(row.indices.begin(), row.indices.end());
  }

  row.A3 = rational_field(r, "A3", table, n);
  row.c1cubed = rational_field(r, "c1cubed", table, n);
  row.c2c1 = rational_field(r, "c2c1", table, n);
  row.bX = rational_field(r, "bX", table, n);
  if (r.contains("bx_approx")) row.bx_approx = r.at("bx_approx").get<std::string>();
  if (r.contains("dims")) row.dims = int_list(r.at("dims"), table, n, "dims");
  if (r.contains("dims_twisted")) row.dims_twisted = int_list(r.at("dims_twisted"), table, n, "dims_twisted");
  if (r.contains("grdb")) row.grdb = r.at("grdb").get<std::string>();
  return row;
}

ordered_json row_to_json(const GoldenRow& row) {
  ordered_json j;
  j["number"] = row.number;
  if (!row.mark.empty()) j["mark"] = row.mark;
  if (row.maybe_torsion) j["maybe_torsion"] = true;
  j["q"] = row.q;
  if (row.iota) j["iota"] = *row.iota;
  if (row.basket) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : row.basket->points()) pts.push_back({p.r, p.b});
    j["basket"] = pts;
  } else {
    j["basket"] = row.indices;
  }
  if (row.A3) j["A3"] = row.A3->str();
  if (row.c1cubed) j["c1cubed"] = row.c1cubed->str();
  if (row.c2c1) j["c2c1"] = row.c2c1->str();
  if (row.bX) j["bX"] = row.bX->str();
  if (!row.bx_approx.empty()) j["bx_approx"] = row.bx_approx;
  if (!row.dims.empty()) j["dims"] = row.dims;
  if (!row.dims_twisted.empty()) j["dims_twisted"] = row.dims_twisted;
  if (!row.grdb.empty()) j["grdb"] = row.grdb;
  return j;
}

Rational sigma_of(const std::vector<int>& indices) {
  Rational s;
  for (const int r : indices) s += Rational(std::int64_t{r} * r - 1, r);
  return s;
}

Rational cube(int q) { return Rational(std::int64_t{q} * q * q); }

GoldenRow project(const CandidateRow& c) {
  GoldenRow g;
  g.q = c.type.q;
  g.indices = c.type.basket.indices();
  g.basket = c.type.basket;
  g.A3 = c.type.A3;
  g.c1cubed = c.type.c1cubed;
  g.c2c1 = c.type.c2c1;
  g.bX = c.type.bX;
  g.bx_approx = c.type.bX.truncated_decimal(4);
  g.dims = c.type.dims;
  return g;
}

bool prefix_of(const std::vector<int>& printed, const std::vector<int>& computed) {
  return printed.size() <= computed.size() && std::equal(printed.begin(), printed.end(), computed.begin());
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (const int x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

// Empty when every column printed in `want` agrees with `have`; otherwise the
// first disagreeing column.
std::string first_mismatch(const GoldenRow& want, const GoldenRow& have) {
  if (want.q != have.q) return "q";
  if (want.indices != have.indices) return "R_X";
  auto rational_col = [](const char* name, const std::optional<Rational>& w, const std::optional<Rational>& h) {
    if (!w) return std::string();
    if (!h) return std::string(name) + " not available";
    if (*w != *h) return std::string(name) + " differs: printed " + w->str() + ", computed " + h->str();
    return std::string();
  };
  if (want.basket && want.basket != have.basket) {
    return "basket differs: printed " + want.basket->str() + ", computed " + (have.basket ? have.basket->str() : "-");
  }
  for (const auto& msg : {rational_col("A3", want.A3, have.A3), rational_col("c1cubed", want.c1cubed, have.c1cubed),
                          rational_col("c2c1", want.c2c1, have.c2c1), rational_col("bX", want.bX, have.bX)}) {
    if (!msg.empty()) return msg;
  }
  if (!want.bx_approx.empty() && want.bx_approx != have.bx_approx) {
    return "bX display differs: printed " + want.bx_approx + ", computed " + have.bx_approx;
  }
  if (!prefix_of(want.dims, have.dims)) return "dims differ: printed " + join(want.dims) + ", computed " + join(have.dims);
  if (!prefix_of(want.dims_twisted, have.dims_twisted)) return "twisted dims differ";
  return {};
}

CompareReport compare_projected(const GoldenTable& table, const std::vector<GoldenRow>& computed) {
  CompareReport report;
  report.table = table.name;
  std::vector<bool> used(computed.size(), false);
  for (const auto& row : table.rows) {
    std::optional<std::size_t> hit;
    std::string near;
    for (std::size_t i = 0; i < computed.size(); ++i) {
      if (used[i]) continue;
      const auto why = first_mismatch(row, computed[i]);
      if (why.empty()) {
        hit = i;
        break;
      }
      if (near.empty() && why != "q" && why != "R_X") near = why;
    }
    if (hit) {
      used[*hit] = true;
      report.matched.push_back({row.number, *hit});
    } else {
      report.missing.push_back({row.number, near.empty() ? "no computed row with q = " + std::to_string(row.q) +
                                                               " and R_X = " + format_indices(row.indices)
                                                         : near});
    }
  }
  for (std::size_t i = 0; i < computed.size(); ++i) {
    if (!used[i]) report.surplus.push_back(i);
  }
  return report;
}

struct Layout {
  bool mark = false, iota = false, full_basket = false, A3 = false, c1 = false, c2 = false, bX = false, approx = false,
       grdb = false;
  std::size_t ndims = 0, ntwisted = 0;
};

Layout layout_of(const GoldenTable& t) {
  Layout l;
  for (const auto& r : t.rows) {
    l.mark |= !r.mark.empty() || r.maybe_torsion;
    l.iota |= r.iota.has_value();
    l.full_basket |= r.basket.has_value();
    l.A3 |= r.A3.has_value();
    l.c1 |= r.c1cubed.has_value();
    l.c2 |= r.c2c1.has_value();
    l.bX |= r.bX.has_value();
    l.approx |= !r.bx_approx.empty();
    l.grdb |= !r.grdb.empty();
    l.ndims = std::max(l.ndims, r.dims.size());
    l.ntwisted = std::max(l.ntwisted, r.dims_twisted.size());
  }
  return l;
}

// Tables whose q column is the Q-Fano index rather than qW = qQ.
bool q_is_qQ(const std::string& name) { return name == "A2" || name == "T1"; }

std::string opt_str(const std::optional<Rational>& r) { return r ? r->str() : ""; }

std::string k_label(std::size_t k) { return k == 1 ? "A" : std::to_string(k) + "A"; }

std::string dim_cell(const std::vector<int>& v, std::size_t i) {
  return i < v.size() ? std::to_string(v[i]) : "";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& known_tables() {
  static const std::vector<std::string> names{"T1", "A1", "A2", "L2.2", "L5.1", "L6-q8"};
  return names;
}

GoldenTable parse_table(std::string_view json_text, std::string_view expected_name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    malformed(expected_name, 0, e.what());
  }
  if (!j.is_object() || !j.contains("name") || !j.contains("rows") || !j.at("rows").is_array()) {
    malformed(expected_name, 0, "expected an object with \"name\" and \"rows\"");
  }
  GoldenTable t;
  t.name = j.at("name").get<std::string>();
  if (!expected_name.empty() && t.name != expected_name) {
    malformed(expected_name, 0, "file declares name '" + t.name + "'");
  }
  if (j.contains("title")) t.title = j.at("title").get<std::string>();
  try {
    for (const auto& r : j.at("rows")) t.rows.push_back(parse_row(r, t.name));
  } catch (const json::exception& e) {
    malformed(t.name, 0, e.what());
  }
  const auto& expected = expected_rows();
  if (auto it = expected.find(t.name); it != expected.end() && it->second != t.rows.size()) {
    malformed(t.name, 0, "expected " + std::to_string(it->second) + " rows, found " + std::to_string(t.rows.size()));
  }
  return t;
}

GoldenTable load_table(std::string_view name, const std::filesystem::path& dir) {
  const auto& names = known_tables();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw FixtureError("unknown table '" + std::string(name) + "' (known: " + list + ")");
  }
  const auto path = dir / (std::string(name) + ".json");
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot read fixture " + path.string() + " (use --fixtures DIR)");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_table(ss.str(), name);
}

std::string dump_table(const GoldenTable& table) {
  std::string out = "{\n  \"name\": " + ordered_json(table.name).dump() + ",\n";
  out += "  \"title\": " + ordered_json(table.title).dump() + ",\n  \"rows\": [\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out += "    " + row_to_json(table.rows[i]).dump() + (i + 1 < table.rows.size() ? ",\n" : "\n");
  }
  return out + "  ]\n}\n";
}

bool CheckReport::pass() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const RowCheck& r) { return !r.pass; }));
}

CheckReport verify_eq_range(const GoldenTable& table) {
  CheckReport rep{table.name, "c2c1 = 24 - sum(r - 1/r)", {}};
  for (const auto& row : table.rows) {
    if (!row.c2c1) {
      rep.rows.push_back({row.number, true, "skipped: no c2c1 column"});
      continue;
    }
    const Rational computed = Rational(24) - sigma_of(row.indices);
    const bool ok = computed == *row.c2c1;
    rep.rows.push_back({row.number, ok, "computed " + computed.str() + ", printed " + row.c2c1->str()});
  }
  return rep;
}

CheckReport verify_display(const GoldenTable& table) {
  CheckReport rep{table.name, "printed column consistency", {}};
  for (const auto& row : table.rows) {
    RowCheck rc{row.number, true, ""};
    auto note = [&](bool ok, const std::string& what) {
      if (!rc.detail.empty()) rc.detail += "; ";
      rc.detail += what + (ok ? " ok" : " FAILED");
      rc.pass = rc.pass && ok;
    };
    if (row.A3 && row.c1cubed) note(*row.c1cubed == cube(row.q) * *row.A3, "c1cubed = q^3 A3");
    if (row.c1cubed && row.c2c1 && row.c2c1->sign() > 0) {
      const Rational b = *row.c1cubed / *row.c2c1;
      if (row.bX) note(*row.bX == b, "bX = c1cubed/c2c1");
      if (!row.bx_approx.empty()) note(b.truncated_decimal(4) == row.bx_approx, "bX display " + row.bx_approx);
    }
    if (rc.detail.empty()) rc.detail = "no derivable columns";
    rep.rows.push_back(std::move(rc));
  }
  return rep;
}

CompareReport compare(const GoldenTable& table, const std::vector<CandidateRow>& computed) {
  std::vector<GoldenRow> projected;
  projected.reserve(computed.size());
  for (const auto& c : computed) projected.push_back(project(c));
  return compare_projected(table, projected);
}

CompareReport compare(const GoldenTable& table, const GoldenTable& other) {
  return compare_projected(table, other.rows);
}

std::string render_markdown(const GoldenTable& table) {
  const Layout l = layout_of(table);
  std::vector<std::string> head{"No."};
  head.push_back(q_is_qQ(table.name) ? "qQ" : "q");
  if (l.iota) head.push_back("iota");
  head.push_back(l.full_basket ? "B_X" : "R_X");
  if (l.A3) head.push_back("A^3");
  if (l.c1) head.push_back("c1^3");
  if (l.c2) head.push_back("c2c1");
  if (l.bX) head.push_back("b_X");
  if (l.approx) head.push_back("b_X ~");
  for (std::size_t k = 1; k <= l.ndims; ++k) head.push_back("\\|" + k_label(k) + "\\|");
  for (std::size_t k = 1; k <= l.ntwisted; ++k) head.push_back("\\|" + k_label(k) + "+-T\\|");
  if (l.grdb) head.push_back("GRDB");

  std::string out;
  if (!table.title.empty()) out += "**" + table.name + "**: " + table.title + "\n\n";
  out += "|";
  for (const auto& h : head) out += " " + h + " |";
  out += "\n|";
  for (std::size_t i = 0; i < head.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& r : table.rows) {
    std::vector<std::string> cells;
    std::string no = std::to_string(r.number);
    if (!r.mark.empty() || r.maybe_torsion) no += " " + r.mark + (r.maybe_torsion ? "†" : "");
    cells.push_back(no);
    cells.push_back(std::to_string(r.q));
    if (l.iota) cells.push_back(r.iota ? std::to_string(*r.iota) : "");
    if (l.full_basket && r.basket) {
      std::string b;
      for (const auto& p : r.basket->points()) b += (b.empty() ? "" : ",") + ("(" + std::to_string(p.r) + "," + std::to_string(p.b) + ")");
      cells.push_back("{" + b + "}");
    } else {
      cells.push_back(format_indices(r.indices));
    }
    if (l.A3) cells.push_back(opt_str(r.A3));
    if (l.c1) cells.push_back(opt_str(r.c1cubed));
    if (l.c2) cells.push_back(opt_str(r.c2c1));
    if (l.bX) cells.push_back(opt_str(r.bX));
    if (l.approx) cells.push_back(r.bx_approx);
    for (std::size_t k = 0; k < l.ndims; ++k) cells.push_back(dim_cell(r.dims, k));
    for (std::size_t k = 0; k < l.ntwisted; ++k) cells.push_back(dim_cell(r.dims_twisted, k));
    if (l.grdb) cells.push_back(r.grdb);
    out += "|";
    for (const auto& c : cells) out += " " + c + " |";
    out += "\n";
  }
  return out;
}

std::string render_csv(const GoldenTable& table) {
  const Layout l = layout_of(table);
  std::vector<std::string> head{"number"};
  if (l.mark) head.insert(head.end(), {"mark", "maybe_torsion"});
  head.push_back(q_is_qQ(table.name) ? "qQ" : "q");
  if (l.iota) head.push_back("iota");
  head.push_back("R_X");
  if (l.full_basket) head.push_back("basket");
  if (l.A3) head.push_back("A3");
  if (l.c1) head.push_back("c1cubed");
  if (l.c2) head.push_back("c2c1");
  if (l.bX) head.push_back("bX");
  if (l.approx) head.push_back("bx_approx");
  for (std::size_t k = 1; k <= l.ndims; ++k) head.push_back("dim" + std::to_string(k));
  for (std::size_t k = 1; k <= l.ntwisted; ++k) head.push_back("dimT" + std::to_string(k));
  if (l.grdb) head.push_back("grdb");

  std::string out;
  for (std::size_t i = 0; i < head.size(); ++i) out += (i ? "," : "") + head[i];
  out += "\n";
  for (const auto& r : table.rows) {
    std::vector<std::string> cells{std::to_string(r.number)};
    if (l.mark) cells.insert(cells.end(), {r.mark, r.maybe_torsion ? "1" : "0"});
    cells.push_back(std::to_string(r.q));
    if (l.iota) cells.push_back(r.iota ? std::to_string(*r.iota) : "");
    cells.push_back(format_indices(r.indices));
    if (l.full_basket) cells.push_back(r.basket ? r.basket->str() : "");
    if (l.A3) cells.push_back(opt_str(r.A3));
    if (l.c1) cells.push_back(opt_str(r.c1cubed));
    if (l.c2) cells.push_back(opt_str(r.c2c1));
    if (l.bX) cells.push_back(opt_str(r.bX));
    if (l.approx) cells.push_back(r.bx_approx);
    for (std::size_t k = 0; k < l.ndims; ++k) cells.push_back(dim_cell(r.dims, k));
    for (std::size_t k = 0; k < l.ntwisted; ++k) cells.push_back(dim_cell(r.dims_twisted, k));
    if (l.grdb) cells.push_back(r.grdb);
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
    out += "\n";
  }
  return out;
}

}  // namespace qfano
