#include "qfano/enumerator.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

#include "qfano/errors.hpp"

namespace qfano {

namespace {

constexpr int kMaxIndex = 24;  // r - 1/r < 24 forces r <= 24

std::vector<OrbifoldPoint> point_types() {
  std::vector<OrbifoldPoint> types;
  for (int r = 2; r <= kMaxIndex; ++r) {
    for (int b = 1; 2 * b <= r; ++b) {
      if (std::gcd(r, b) == 1) types.push_back({r, b});
    }
  }
  return types;
}

// Correction terms c_Q(tA) for one q, indexed by [type][t - t_lo].
struct CorrectionTable {
  int q = 0;
  int t_lo = 0;
  int t_hi = 0;
  std::vector<std::vector<Rational>> values;

  const Rational& at(std::size_t type, int t) const { return values[type][static_cast<std::size_t>(t - t_lo)]; }
};

CorrectionTable build_table(int q, int kmax, const std::vector<OrbifoldPoint>& types) {
  CorrectionTable table{q, -(q - 1), kmax, {}};
  table.values.resize(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (std::gcd(types[i].r, q) != 1) continue;
    for (int t = table.t_lo; t <= table.t_hi; ++t) table.values[i].push_back(c_Q(types[i], q, t));
  }
  return table;
}

// Basket as indices into the point type list, with precomputed invariants.
struct IndexedBasket {
  std::vector<std::size_t> type_ids;
  Basket basket;
};

std::optional<CandidateRow> evaluate(const IndexedBasket& ib, const CorrectionTable& table,
                                     const SearchConfig& config) {
  const int q = table.q;
  const Basket& basket = ib.basket;
  if (std::gcd(basket.gorenstein_index(), static_cast<std::int64_t>(q)) != 1) return std::nullopt;
  const Rational c2c1 = c2c1_from_basket(basket);
  if (c2c1.sign() <= 0) return std::nullopt;

  auto correction = [&](int t) {
    Rational sum;
    for (const auto id : ib.type_ids) sum += table.at(id, t);
    return sum;
  };
  auto chi_at = [&](const Rational& A3, int t) {
    const std::int64_t tt = t;
    return Rational(1) + Rational(tt * (q + tt) * (q + 2 * tt), 12) * A3 +
           Rational(tt, 12 * std::int64_t{q}) * c2c1 + correction(t);
  };

  const Rational A3 = Rational(12, std::int64_t{q - 1} * (q - 2)) *
                      (Rational(1) - c2c1 / Rational(12 * std::int64_t{q}) + correction(-1));
  if (A3.sign() <= 0) return std::nullopt;
  if (!(Rational(basket.gorenstein_index()) * A3).is_integer()) return std::nullopt;
  for (int t = -2; t > -q; --t) {
    if (chi_at(A3, t).sign() != 0) return std::nullopt;
  }
  std::vector<int> dims;
  for (int k = 1; k <= config.kmax_dims; ++k) {
    const Rational d = chi_at(A3, k) - Rational(1);
    if (!d.is_integer() || d < Rational(-1)) return std::nullopt;
    dims.push_back(static_cast<int>(d.to_int64()));
  }

  CandidateRow row;
  row.type.q = q;
  row.type.basket = basket;
  row.type.A3 = A3;
  row.type.c2c1 = c2c1;
  row.type.c1cubed = Rational(std::int64_t{q} * q * q) * A3;
  row.type.bX = row.type.c1cubed / c2c1;
  row.type.dims = std::move(dims);
  row.filters = {"c2c1>0", "A3>0", "integrality", "vanishing", "integral-dims"};

  const Rational& bX = row.type.bX;
  if (config.bx_min) {
    if (bX < *config.bx_min) return std::nullopt;
    row.filters.emplace_back("bx-min");
  }
  if (config.bx_max_strict) {
    if (!(bX < *config.bx_max_strict)) return std::nullopt;
    row.filters.emplace_back("bx-max");
  }
  if (config.apply_clubsuit) {
    if (!satisfies_clubsuit(q, bX)) return std::nullopt;
    row.filters.emplace_back("clubsuit");
  }
  return row;
}

bool same_display(const FanoNumericalType& a, const FanoNumericalType& b) {
  return a.c1cubed == b.c1cubed && a.c2c1 == b.c2c1 && a.dims == b.dims;
}

// Collapses twist assignments that agree on every displayed invariant and
// flags (q, R_X) groups that still split into several rows.
std::vector<CandidateRow> collapse(std::vector<CandidateRow> rows) {
  std::vector<CandidateRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    const auto idx = rows[i].indices();
    while (j < rows.size() && rows[j].type.q == rows[i].type.q && rows[j].indices() == idx) ++j;
    const std::size_t first_out = out.size();
    for (std::size_t k = i; k < j; ++k) {
      auto it = std::find_if(out.begin() + static_cast<std::ptrdiff_t>(first_out), out.end(),
                             [&](const CandidateRow& r) { return same_display(r.type, rows[k].type); });
      if (it == out.end()) {
        out.push_back(std::move(rows[k]));
      } else {
        it->alternates.push_back(rows[k].type.basket);
      }
    }
    if (out.size() - first_out > 1) {
      for (std::size_t k = first_out; k < out.size(); ++k) out[k].b_ambiguous = true;
    }
    i = j;
  }
  return out;
}

}  // namespace

bool is_fano_index(int q) { return std::find(kFanoIndices.begin(), kFanoIndices.end(), q) != kFanoIndices.end(); }

void SearchConfig::validate() const {
  for (const int q : q_set) {
    if (std::find(kSearchIndices.begin(), kSearchIndices.end(), q) == kSearchIndices.end()) {
      throw DomainError("q = " + std::to_string(q) + " is not a searchable Fano index (allowed: 3-9, 11, 13, 17, 19)");
    }
  }
  if (kmax_dims < 1) throw DomainError("kmax must be >= 1");
  if (jobs < 1) throw DomainError("jobs must be >= 1");
}

ClubsuitBound clubsuit_bound(int q) {
  if (q < 3) throw DomainError("clubsuit_bound: requires q >= 3");
  if (q == 4) return {Rational(64, 21), false};
  if (q == 5) return {Rational(25, 8), false};
  return {Rational(3), true};
}

bool satisfies_clubsuit(int q, const Rational& bX) {
  const auto [bound, strict] = clubsuit_bound(q);
  return strict ? bX < bound : bX <= bound;
}

void for_each_basket(const std::function<void(const Basket&)>& visit) {
  const auto types = point_types();
  // Exact integer weights over the common denominator lcm(2..24).
  std::int64_t L = 1;
  for (const auto& t : types) L = std::lcm(L, static_cast<std::int64_t>(t.r));
  std::vector<std::int64_t> weight;
  for (const auto& t : types) weight.push_back((std::int64_t{t.r} * t.r - 1) * (L / t.r));
  const std::int64_t bound = 24 * L;

  std::vector<OrbifoldPoint> current;
  auto dfs = [&](auto&& self, std::size_t first, std::int64_t total) -> void {
    visit(Basket(current));
    for (std::size_t i = first; i < types.size(); ++i) {
      // Weights are not monotone in the type order, so no early break.
      if (total + weight[i] >= bound) continue;
      current.push_back(types[i]);
      self(self, i, total + weight[i]);
      current.pop_back();
    }
  };
  dfs(dfs, 0, 0);
}

std::vector<Basket> enumerate_baskets() {
  std::vector<Basket> out;
  for_each_basket([&](const Basket& b) { out.push_back(b); });
  return out;
}

bool row_less(const CandidateRow& a, const CandidateRow& b) {
  if (a.type.q != b.type.q) return a.type.q < b.type.q;
  const auto ia = a.indices();
  const auto ib = b.indices();
  if (ia != ib) return ia < ib;
  return a.type.basket < b.type.basket;
}

std::vector<CandidateRow> enumerate_candidates(const SearchConfig& config) {
  config.validate();
  const auto types = point_types();
  std::vector<IndexedBasket> baskets;
  for_each_basket([&](const Basket& b) {
    IndexedBasket ib;
    for (const auto& p : b.points()) {
      ib.type_ids.push_back(static_cast<std::size_t>(std::find(types.begin(), types.end(), p) - types.begin()));
    }
    ib.basket = b;
    baskets.push_back(std::move(ib));
  });

  std::vector<int> qs = config.q_set;
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  std::vector<CorrectionTable> tables;
  for (const int q : qs) tables.push_back(build_table(q, config.kmax_dims, types));

  const auto jobs = static_cast<std::size_t>(config.jobs);
  std::vector<std::vector<CandidateRow>> partial(jobs);
  auto work = [&](std::size_t worker) {
    for (std::size_t i = worker; i < baskets.size(); i += jobs) {
      for (const auto& table : tables) {
        if (auto row = evaluate(baskets[i], table, config)) partial[worker].push_back(std::move(*row));
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < jobs; ++w) threads.emplace_back(work, w);
  }

  std::vector<CandidateRow> rows;
  for (auto& p : partial) std::move(p.begin(), p.end(), std::back_inserter(rows));
  std::sort(rows.begin(), rows.end(), row_less);
  return collapse(std::move(rows));
}

}  // namespace qfano
