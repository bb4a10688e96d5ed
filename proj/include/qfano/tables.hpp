#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfano/enumerator.hpp"
#include "qfano/orbifold_rr.hpp"
#include "qfano/rational.hpp"

namespace qfano {

/// One printed row. Columns the source table does not print stay empty.
struct GoldenRow {
  int number = 0;
  std::string mark;  // realizability annotation, opaque: "+", "+!", "-", "?"
  bool maybe_torsion = false;
  int q = 0;
  std::optional<int> iota;
  std::vector<int> indices;
  std::optional<Basket> basket;  // only where twists are printed
  std::optional<Rational> A3;
  std::optional<Rational> c1cubed;
  std::optional<Rational> c2c1;
  std::optional<Rational> bX;
  std::string bx_approx;
  std::vector<int> dims;          // dim|kA|, k = 1..
  std::vector<int> dims_twisted;  // dim|kA +- T|, k = 1..
  std::string grdb;

  friend bool operator==(const GoldenRow&, const GoldenRow&) = default;
};

struct GoldenTable {
  std::string name;
  std::string title;
  std::vector<GoldenRow> rows;

  friend bool operator==(const GoldenTable&, const GoldenTable&) = default;
};

/// Names accepted by load_table, in a fixed order.
const std::vector<std::string>& known_tables();

/// Reads `<dir>/<name>.json`. Throws FixtureError for unknown names,
/// unreadable or malformed files, and wrong row counts.
GoldenTable load_table(std::string_view name, const std::filesystem::path& dir);

/// Parses fixture JSON text; `expected_name` is checked when non-empty.
GoldenTable parse_table(std::string_view json_text, std::string_view expected_name = {});
std::string dump_table(const GoldenTable& table);

struct RowCheck {
  int number = 0;
  bool pass = true;
  std::string detail;
};

struct CheckReport {
  std::string table;
  std::string check;
  std::vector<RowCheck> rows;

  bool pass() const;
  std::size_t failures() const;
};

/// c2c1 = 24 - sum(r - 1/r) for rows printing c2c1; other rows are skipped.
CheckReport verify_eq_range(const GoldenTable& table);

/// Internal consistency of printed columns: c1^3 = q^3 A^3 where both are
/// printed, b_X = c1^3 / c2c1 where exact, and the truncated b_X display.
CheckReport verify_display(const GoldenTable& table);

struct CompareReport {
  std::string table;
  struct Match {
    int number = 0;
    std::size_t computed = 0;  // position in the computed list
  };
  struct Missing {
    int number = 0;
    std::string reason;
  };
  std::vector<Match> matched;
  std::vector<Missing> missing;
  std::vector<std::size_t> surplus;  // positions in the computed list

  bool ok() const { return missing.empty(); }
};

/// Projects computed rows onto the printed columns and matches them row by
/// row. A computed row matches when every column the table prints agrees.
CompareReport compare(const GoldenTable& table, const std::vector<CandidateRow>& computed);

/// Matches against the rows of another table, e.g. the table itself.
CompareReport compare(const GoldenTable& table, const GoldenTable& other);

/// Markdown and CSV renderings in the printed column layout of each table.
std::string render_markdown(const GoldenTable& table);
std::string render_csv(const GoldenTable& table);

}  // namespace qfano
