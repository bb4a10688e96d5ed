#include "qfano/sarkisov.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <set>
#include <tuple>

#include "qfano/enumerator.hpp"
#include "qfano/errors.hpp"
#include "qfano/number_theory.hpp"

namespace qfano {

namespace {

constexpr int kMaxFanoIndex = 19;

std::string ks(int k) { return std::to_string(k); }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

int floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<int>(q);
}

int ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

bool dim_one_empty(const LinkContext& ctx) { return ctx.nt.dim(1) == -1; }

// "(4 m_3 + 1)" for the coefficient c + q m of e.
std::string coefficient_text(const LinkContext& ctx, int k) {
  const int q = ctx.nt.q;
  const int c = ctx.c(k);
  std::string out = "(" + ks(q) + " m_" + ks(k);
  if (c > 0) out += " + " + ks(c);
  if (c < 0) out += " - " + ks(-c);
  return out + ")";
}

std::string equality_text(const LinkContext& ctx, int k) {
  return ks(k) + " qhat = " + ks(ctx.nt.q) + " s_" + ks(k) + " + " + coefficient_text(ctx, k) + " e";
}

std::string range_text(const std::vector<int>& values, const std::string& name) {
  if (values.empty()) return name + " unconstrained";
  if (values.size() == 1) return name + " = " + ks(values.front());
  const bool contiguous = values.back() - values.front() + 1 == static_cast<int>(values.size());
  if (contiguous) return ks(values.front()) + " <= " + name + " <= " + ks(values.back());
  std::vector<std::string> parts;
  for (const int v : values) parts.push_back(ks(v));
  return name + " in {" + join(parts, ",") + "}";
}

std::string options_text(const std::vector<std::pair<int, int>>& opts, int k, bool beta) {
  std::vector<std::string> parts;
  for (const auto& [s, m] : opts) parts.push_back("(" + ks(s) + "," + ks(m) + ")");
  const std::string m_name = (beta ? "beta_" : "m_") + ks(k);
  return "(s_" + ks(k) + ", " + m_name + ") in {" + join(parts, ",") + "}";
}

// Admissible (s_k, m_k) for fixed (qhat, e). At curve and Gorenstein centres
// the second entry is beta_k itself.
std::vector<std::pair<int, int>> solve_at(const LinkContext& ctx, const CaseSolution& c, int k) {
  std::vector<std::pair<int, int>> out;
  const std::int64_t q = ctx.nt.q;
  const std::int64_t lhs = std::int64_t{k} * c.q_hat;
  if (ctx.center.quotient()) {
    const std::int64_t base = ctx.c(k);
    for (std::int64_t m = ctx.m_min(k); (base + q * m) * c.e <= lhs; ++m) {
      const std::int64_t rem = lhs - (base + q * m) * c.e;
      if (rem % q == 0) out.emplace_back(static_cast<int>(rem / q), static_cast<int>(m));
    }
  } else {
    if (!c.alpha) throw DomainError("curve or Gorenstein case without alpha");
    const std::int64_t a = *c.alpha;
    std::int64_t b_min = 0;
    if (k == ctx.k0) b_min = std::int64_t{ctx.beta_floor.t_star} * a;
    for (std::int64_t b = b_min; (q * b - k * a) * c.e <= lhs; ++b) {
      const std::int64_t rem = lhs - (q * b - k * a) * c.e;
      if (rem % q == 0) out.emplace_back(static_cast<int>(rem / q), static_cast<int>(b));
    }
  }
  return out;
}

std::string indices_label(const FanoNumericalType& t) { return format_indices(t.basket.indices()); }

// List constraints at the drive step; returns the first violation, if any.
std::optional<std::string> list_violation(const LinkContext& ctx, int q_hat, int e, int s, int k,
                                          TargetTables& tables) {
  const int need = ctx.nt.dim(k);
  if (q_hat >= 4 && s == 0 && need != 0) return "qhat >= 4 is birational, so s_" + ks(k) + " > 0";
  if (q_hat >= 8) {
    if (dim_one_empty(ctx) && e < 2) return "qhat >= 8 is torsion-free, so e = d >= 2";
    if (s > 0) {
      const auto& rows = tables.torsion_free(q_hat);
      const bool any = std::any_of(rows.begin(), rows.end(), [&](const FanoNumericalType& t) { return t.dim(s) >= need; });
      if (!any) return "no index-" + ks(q_hat) + " type has dim|" + ks(s) + "A| >= " + ks(need);
    }
  }
  return std::nullopt;
}

std::vector<std::string> list_notes(const LinkContext& ctx, int q_hat, int k) {
  std::vector<std::string> notes;
  const int need = ctx.nt.dim(k);
  if (q_hat >= 4) {
    notes.push_back("qhat >= 4: link is birational" +
                    (need != 0 ? ", s_" + ks(k) + " > 0 as dim|" + ks(k) + "A| = " + ks(need) : std::string()));
  }
  if (q_hat >= 8) {
    std::string n = "qhat >= 8: Cl(X^) torsion-free";
    if (dim_one_empty(ctx)) n += ", e = d >= 2 as dim|A| = -1";
    n += ", dim|s_" + ks(k) + " A^| >= " + ks(need) + " against enumerated index-" + ks(q_hat) + " types";
    notes.push_back(n);
  }
  return notes;
}

enum class Verdict { Pass, Unknown, Fail };

Verdict best(Verdict a, Verdict b) { return std::min(a, b); }
Verdict worst(Verdict a, Verdict b) { return std::max(a, b); }

CaseStatus to_status(Verdict v) {
  switch (v) {
    case Verdict::Pass: return CaseStatus::Survivor;
    case Verdict::Unknown: return CaseStatus::InsufficientData;
    case Verdict::Fail: return CaseStatus::Excluded;
  }
  return CaseStatus::Excluded;
}

// Options compatible with a birational link: s_k = 0 needs dim|kA| = 0.
std::map<int, std::vector<std::pair<int, int>>> birational_options(const CaseSolution& c, const LinkContext& ctx,
                                                                   std::string& violation) {
  std::map<int, std::vector<std::pair<int, int>>> out;
  for (const auto& [k, opts] : c.options) {
    const int need = ctx.nt.dim(k);
    auto& kept = out[k];
    for (const auto& o : opts) {
      if (o.first > 0 || need == 0) kept.push_back(o);
    }
    if (kept.empty() && violation.empty()) {
      violation = "birational link needs s_" + ks(k) + " > 0 as dim|" + ks(k) + "A| = " + ks(need);
    }
  }
  return out;
}

// For each target row: every recorded k has an option passing `check`.
template <typename Row, typename Check>
Verdict rows_verdict(const std::vector<Row>& rows, const std::map<int, std::vector<std::pair<int, int>>>& opts,
                     const Check& check, std::vector<std::size_t>& passing) {
  Verdict overall = Verdict::Fail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Verdict row_v = Verdict::Pass;
    for (const auto& [k, list] : opts) {
      Verdict k_v = Verdict::Fail;
      for (const auto& [s, m] : list) k_v = best(k_v, check(rows[i], k, s));
      row_v = worst(row_v, k_v);
    }
    if (row_v == Verdict::Pass) passing.push_back(i);
    overall = best(overall, row_v);
  }
  return overall;
}

std::string recorded_ks(const CaseSolution& c) {
  std::vector<std::string> parts;
  for (const auto& [k, _] : c.options) parts.push_back(ks(k));
  return parts.size() == 1 ? "k = " + parts.front() : "k in {" + join(parts, ",") + "}";
}

Branch torsion_free_branch(const CaseSolution& c, const LinkContext& ctx, TargetTables& tables) {
  Branch b{Branch::Kind::TorsionFree, CaseStatus::Survivor, "", {}};
  if (dim_one_empty(ctx) && c.e < 2) {
    b.verdict = CaseStatus::Excluded;
    b.reason = "torsion-free X^ needs e = d >= 2 as dim|A| = -1";
    return b;
  }
  std::string violation;
  const auto opts = birational_options(c, ctx, violation);
  if (!violation.empty()) {
    b.verdict = CaseStatus::Excluded;
    b.reason = violation;
    return b;
  }
  if (c.q_hat < 6) {
    b.reason = "no dimension table for torsion-free index " + ks(c.q_hat);
    return b;
  }
  const auto& rows = tables.torsion_free(c.q_hat);
  std::vector<std::size_t> passing;
  const auto v = rows_verdict(rows, opts,
                              [&](const FanoNumericalType& t, int k, int s) {
                                if (s == 0) return Verdict::Pass;
                                return t.dim(s) >= ctx.nt.dim(k) ? Verdict::Pass : Verdict::Fail;
                              },
                              passing);
  for (const auto i : passing) b.candidates.push_back(indices_label(rows[i]));
  b.verdict = to_status(v);
  if (v == Verdict::Fail) {
    b.reason = "no torsion-free index-" + ks(c.q_hat) + " type has dim|s_k A^| >= dim|kA| at " + recorded_ks(c);
  }
  return b;
}

Branch torsion_branch(const CaseSolution& c, const LinkContext& ctx, TargetTables& tables) {
  Branch b{Branch::Kind::Torsion, CaseStatus::Survivor, "", {}};
  std::string violation;
  const auto opts = birational_options(c, ctx, violation);
  if (!violation.empty()) {
    b.verdict = CaseStatus::Excluded;
    b.reason = violation;
    return b;
  }
  if (c.q_hat == 6) {
    b.verdict = CaseStatus::Excluded;
    b.reason = "no index-6 type with torsion in T1";
    return b;
  }
  if (c.q_hat == 5 || c.q_hat == 7) {
    const auto rows = tables.torsion(c.q_hat);
    std::vector<std::size_t> passing;
    const auto v = rows_verdict(rows, opts,
                                [&](const GoldenRow& r, int k, int s) {
                                  if (s == 0) return Verdict::Pass;
                                  const auto n = static_cast<std::size_t>(s);
                                  if (n > r.dims.size() || n > r.dims_twisted.size()) return Verdict::Unknown;
                                  const int best_dim = std::max(r.dims[n - 1], r.dims_twisted[n - 1]);
                                  return best_dim >= ctx.nt.dim(k) ? Verdict::Pass : Verdict::Fail;
                                },
                                passing);
    for (const auto i : passing) b.candidates.push_back("T1 #" + ks(rows[i].number));
    b.verdict = to_status(v);
    if (v == Verdict::Fail) {
      b.reason = "no T1 row of index " + ks(c.q_hat) + " has max(dim|s_k A^|, dim|s_k A^ +- T|) >= dim|kA| at " +
                 recorded_ks(c);
    } else if (v == Verdict::Unknown) {
      b.reason = "T1 lists dim|sA^| only for s <= 4";
    }
    return b;
  }
  if (c.q_hat == 3) {
    for (const auto& [k, list] : opts) {
      const int need = ctx.nt.dim(k);
      const bool all_one = std::all_of(list.begin(), list.end(), [](const auto& o) { return o.first == 1; });
      if (all_one && need > 1) {
        b.verdict = CaseStatus::Excluded;
        b.reason = "index 3 with torsion has dim|A^| <= 1, but s_" + ks(k) + " = 1 and dim|" + ks(k) + "A| = " + ks(need);
        return b;
      }
    }
  }
  b.reason = "no torsion data for index " + ks(c.q_hat);
  return b;
}

void apply_status(CaseSolution& c) {
  std::vector<std::string> fails;
  bool alive = false;
  bool unknown = false;
  std::vector<std::string> survivors;
  for (const auto& b : c.branches) {
    if (b.verdict == CaseStatus::Survivor) {
      alive = true;
      survivors.emplace_back(branch_name(b.kind));
    } else if (b.verdict == CaseStatus::InsufficientData) {
      unknown = true;
      fails.push_back(std::string(branch_name(b.kind)) + ": " + b.reason);
    } else {
      fails.push_back(std::string(branch_name(b.kind)) + ": " + b.reason);
    }
  }
  if (alive) {
    c.status = CaseStatus::Survivor;
    c.reason = "requires geometric argument (open: " + join(survivors, ", ") + ")";
  } else if (unknown) {
    c.status = CaseStatus::InsufficientData;
    c.reason = join(fails, "; ");
  } else {
    c.status = CaseStatus::Excluded;
    c.reason = join(fails, "; ");
  }
}

std::string case_text(const CaseSolution& c, int k) {
  return "(qhat, e, s_" + ks(k) + ") = (" + ks(c.q_hat) + ", " + ks(c.e) + ", " + ks(c.s.at(k)) + ")";
}

}  // namespace

Center Center::parse(std::string_view text) {
  if (text == "curve") return {Kind::Curve, 0};
  if (text == "gorenstein") return {Kind::GorensteinPoint, 0};
  constexpr std::string_view prefix = "index:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto digits = text.substr(prefix.size());
    int r = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && r >= 2) return {Kind::QuotientPoint, r};
  }
  throw ParseError("invalid centre '" + std::string(text) + "' (expected curve, gorenstein or index:R with R >= 2)");
}

std::string Center::str() const {
  switch (kind) {
    case Kind::Curve: return "curve";
    case Kind::GorensteinPoint: return "gorenstein";
    case Kind::QuotientPoint: return "index:" + ks(r);
  }
  return {};
}

std::map<int, int> local_multiples(int q, int r, int kmax) {
  const auto inv = mod_inverse(q, r);
  std::map<int, int> t;
  for (int k = 1; k <= kmax; ++k) t[k] = static_cast<int>(mod(k * inv, r));
  return t;
}

BetaFloor ct_beta_floor(const LinkContext& ctx) {
  BetaFloor f;
  for (const auto& p : ctx.nt.basket.points()) {
    const int t = static_cast<int>(mod(std::int64_t{ctx.k0} * mod_inverse(ctx.nt.q, p.r), p.r));
    if (t > f.t_star) {
      f.t_star = t;
      f.witness_r = p.r;
    }
  }
  f.value = ctx.alpha * Rational(f.t_star);
  return f;
}

LinkContext LinkContext::make(FanoNumericalType nt, int k0, Center center, int kmax) {
  if (k0 < 1) throw DomainError("movable system |k0 A| needs k0 >= 1");
  if (nt.basket.empty()) throw DomainError("the link analysis needs a non-Gorenstein point in the basket");
  if (nt.dim(k0) < 1) {
    throw DomainError("|" + ks(k0) + "A| is not movable (dim = " + ks(nt.dim(k0)) + ")");
  }
  LinkContext ctx;
  ctx.k0 = k0;
  ctx.center = center;
  ctx.kmax = std::max(kmax, k0);
  if (center.quotient()) {
    const auto idx = nt.basket.indices();
    if (std::find(idx.begin(), idx.end(), center.r) == idx.end()) {
      throw DomainError("no point of index " + ks(center.r) + " in the basket " + format_indices(idx));
    }
    ctx.alpha = Rational(1, center.r);
    ctx.t = local_multiples(nt.q, center.r, ctx.kmax);
  } else {
    ctx.alpha = Rational(1);
    ctx.alpha_symbolic = true;
  }
  ctx.nt = std::move(nt);
  ctx.beta_floor = ct_beta_floor(ctx);
  return ctx;
}

int LinkContext::c(int k) const {
  if (!center.quotient()) throw DomainError("c_k is defined at quotient centres only");
  const std::int64_t t_k = t.count(k) ? t.at(k) : mod(std::int64_t{k} * mod_inverse(nt.q, center.r), center.r);
  return static_cast<int>((std::int64_t{nt.q} * t_k - k) / center.r);
}

int LinkContext::m_min(int k) const {
  if (k != k0 || !center.quotient()) return 0;
  const int t_k = t.at(k);
  return std::max(0, ceil_div(beta_floor.t_star - t_k, center.r));
}

BetaResidue beta_residue(const LinkContext& ctx, int k) {
  if (!ctx.center.quotient()) throw DomainError("beta_residue: quotient centres only");
  const int t_k = ctx.t.count(k) ? ctx.t.at(k) : local_multiples(ctx.nt.q, ctx.center.r, k).at(k);
  return {Rational(t_k, ctx.center.r), ctx.m_min(k)};
}

std::string_view status_name(CaseStatus s) {
  switch (s) {
    case CaseStatus::Survivor: return "survivor-needs-geometry";
    case CaseStatus::Excluded: return "numerically-excluded";
    case CaseStatus::InsufficientData: return "insufficient-table-data";
  }
  return "";
}

std::string_view branch_name(Branch::Kind k) {
  switch (k) {
    case Branch::Kind::NonBirational: return "non-birational";
    case Branch::Kind::TorsionFree: return "birational, torsion-free";
    case Branch::Kind::Torsion: return "birational, with torsion";
  }
  return "";
}

TargetTables::TargetTables(const GoldenTable& torsion_table) : torsion_(torsion_table) {}

const std::vector<FanoNumericalType>& TargetTables::torsion_free(int q_hat) {
  std::lock_guard lock(mutex_);
  auto it = torsion_free_.find(q_hat);
  if (it != torsion_free_.end()) return it->second;
  std::vector<FanoNumericalType> types;
  if (q_hat >= 6 && is_fano_index(q_hat)) {
    SearchConfig cfg;
    cfg.q_set = {q_hat};
    cfg.bx_max_strict = Rational(3);
    for (auto& row : enumerate_candidates(cfg)) {
      for (const auto& alt : row.alternates) types.push_back(FanoNumericalType::from_basket(q_hat, alt));
      types.push_back(std::move(row.type));
    }
  }
  return torsion_free_.emplace(q_hat, std::move(types)).first->second;
}

std::vector<GoldenRow> TargetTables::torsion(int q_hat) const {
  std::vector<GoldenRow> out;
  for (const auto& r : torsion_.rows) {
    if (r.q == q_hat) out.push_back(r);
  }
  return out;
}

void evaluate_status(CaseSolution& c, const LinkContext& ctx, TargetTables& tables) {
  c.torsion_free_required = c.q_hat >= 8;
  c.d_constraint = dim_one_empty(ctx) ? "d >= 2 if birational (dim|A| = -1)" : "none";
  c.branches.clear();
  c.metadata.clear();
  for (const auto& [k, opts] : c.options) {
    if (opts.empty()) {
      c.status = CaseStatus::Excluded;
      c.reason = "key equality at k = " + ks(k) + " has no non-negative integral solution";
      return;
    }
  }
  if (c.q_hat <= 3) {
    c.branches.push_back({Branch::Kind::NonBirational, CaseStatus::Survivor, "", {}});
    if (c.q_hat == 3) c.metadata.emplace_back("if non-birational: general fibre P^2, X^ = P^1");
  }
  c.branches.push_back(torsion_free_branch(c, ctx, tables));
  if (c.q_hat <= 7) c.branches.push_back(torsion_branch(c, ctx, tables));
  apply_status(c);
}

std::vector<CaseSolution> key_equality_cases(const LinkContext& ctx, int drive_k, TargetTables& tables) {
  if (drive_k < 1) throw DomainError("drive k must be >= 1");
  if (ctx.nt.dim(drive_k) < 0) throw DomainError("|" + ks(drive_k) + "A| is empty; nothing to drive");
  const std::int64_t q = ctx.nt.q;
  const int k = drive_k;
  std::vector<CaseSolution> out;

  auto emit = [&](int q_hat, int e, int s, int m, std::optional<int> alpha, std::optional<int> beta) {
    if (list_violation(ctx, q_hat, e, s, k, tables)) return;
    CaseSolution c;
    c.q_hat = q_hat;
    c.e = e;
    c.s[k] = s;
    c.m[k] = m;
    c.options[k] = {{s, m}};
    c.alpha = alpha;
    c.beta = beta;
    c.trace.push_back("k = " + ks(k) + ": " + ks(k) + "*" + ks(q_hat) + " = " + ks(ctx.nt.q) + "*" + ks(s) + " + " +
                      (ctx.center.quotient() ? "(" + ks(ctx.c(k) + ctx.nt.q * m) + ")"
                                             : "(" + ks(ctx.nt.q) + "*" + ks(*beta) + " - " + ks(k) + "*" + ks(*alpha) + ")") +
                      "*" + ks(e));
    for (auto& n : list_notes(ctx, q_hat, k)) c.trace.push_back(std::move(n));
    out.push_back(std::move(c));
  };

  if (ctx.center.quotient()) {
    const std::int64_t base = ctx.c(k);
    const int m0 = ctx.m_min(k);
    if (base + q * m0 <= 0) {
      throw DomainError("key equality at k = " + ks(k) + " is unbounded in e (q beta_k - k alpha can be <= 0)");
    }
    for (const int q_hat : kFanoIndices) {
      const std::int64_t lhs = std::int64_t{k} * q_hat;
      for (std::int64_t m = m0; base + q * m <= lhs; ++m) {
        const std::int64_t w = base + q * m;
        for (std::int64_t e = 1; w * e <= lhs; ++e) {
          const std::int64_t rem = lhs - w * e;
          if (rem % q == 0) emit(q_hat, static_cast<int>(e), static_cast<int>(rem / q), static_cast<int>(m), {}, {});
        }
      }
    }
  } else {
    if (drive_k != ctx.k0) {
      throw DomainError("curve and Gorenstein centres bound beta only at k0 = " + ks(ctx.k0) + "; use --drive-k " +
                        ks(ctx.k0));
    }
    const std::int64_t g = q * ctx.beta_floor.t_star - k;
    if (g <= 0) throw DomainError("canonical-threshold bound too weak to bound alpha at k = " + ks(k));
    for (const int q_hat : kFanoIndices) {
      const std::int64_t lhs = std::int64_t{k} * q_hat;
      for (std::int64_t a = 1; g * a <= lhs; ++a) {
        for (std::int64_t b = ctx.beta_floor.t_star * a; q * b - k * a <= lhs; ++b) {
          const std::int64_t w = q * b - k * a;
          for (std::int64_t e = 1; w * e <= lhs; ++e) {
            const std::int64_t rem = lhs - w * e;
            if (rem % q == 0) {
              emit(q_hat, static_cast<int>(e), static_cast<int>(rem / q), static_cast<int>(b - ctx.beta_floor.t_star * a),
                   static_cast<int>(a), static_cast<int>(b));
            }
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [k](const CaseSolution& a, const CaseSolution& b) {
    return std::tuple(a.q_hat, a.e, a.s.at(k), a.m.at(k), a.alpha, a.beta) <
           std::tuple(b.q_hat, b.e, b.s.at(k), b.m.at(k), b.alpha, b.beta);
  });
  return out;
}

CaseSolution refine_case(CaseSolution c, const LinkContext& ctx, int k, TargetTables& tables) {
  if (k < 1) throw DomainError("refinement needs k >= 1");
  const CaseStatus before = c.status;
  const int need = ctx.nt.dim(k);
  if (need < 0) {
    c.trace.push_back("k = " + ks(k) + ": |" + ks(k) + "A| is empty, no constraint");
    return c;
  }
  auto opts = solve_at(ctx, c, k);
  const bool curve = !ctx.center.quotient();
  std::string line = "k = " + ks(k) + ": " + ks(k) + "*" + ks(c.q_hat) + " = " + ks(ctx.nt.q) + " s_" + ks(k) + " + ";
  line += curve ? "(" + ks(ctx.nt.q) + " beta_" + ks(k) + " - " + ks(k) + "*" + ks(*c.alpha) + ")"
                : coefficient_text(ctx, k);
  line += "*" + ks(c.e);
  if (opts.empty()) {
    line += ": no non-negative integral solution";
  } else {
    line += " -> " + options_text(opts, k, curve);
  }
  c.trace.push_back(line);
  if (opts.size() == 1) {
    c.s[k] = opts.front().first;
    c.m[k] = opts.front().second;
  }
  c.options[k] = std::move(opts);
  evaluate_status(c, ctx, tables);
  if (c.status != before && c.status != CaseStatus::Survivor) {
    c.trace.push_back("status after k = " + ks(k) + ": " + std::string(status_name(c.status)) + " (" + c.reason + ")");
  }
  return c;
}

std::vector<Family> group_families(const std::vector<CaseSolution>& cases, int drive_k) {
  // (qhat, e) pairs in order of first appearance.
  std::vector<std::pair<int, int>> pairs;
  for (const auto& c : cases) {
    const std::pair p{c.q_hat, c.e};
    if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) pairs.push_back(p);
  }
  std::map<int, std::vector<int>> by_offset;
  for (const auto& [qh, e] : pairs) by_offset[qh - e].push_back(e);

  std::vector<Family> families;
  for (auto& [offset, es] : by_offset) {
    std::sort(es.begin(), es.end());
    std::size_t i = 0;
    while (i < es.size()) {
      std::size_t j = i + 1;
      while (j < es.size() && es[j] == es[j - 1] + 1) ++j;
      Family f;
      f.offset = offset;
      f.e_min = es[i];
      f.e_max = es[j - 1];
      std::set<int> svals;
      for (std::size_t n = 0; n < cases.size(); ++n) {
        const auto& c = cases[n];
        if (c.q_hat - c.e == offset && c.e >= f.e_min && c.e <= f.e_max) {
          f.members.push_back(n);
          svals.insert(c.s.at(drive_k));
        }
      }
      f.s_values.assign(svals.begin(), svals.end());
      const std::string s_part = range_text(f.s_values, "s_" + ks(drive_k));
      if (f.e_min == f.e_max) {
        f.label = "qhat = " + ks(offset + f.e_min) + ", e = " + ks(f.e_min) + ", " + s_part;
      } else {
        std::string form = offset == 0 ? "e" : offset > 0 ? ks(offset) + "+e" : "e-" + ks(-offset);
        f.label = "qhat = " + form + ", " + ks(f.e_min) + " <= e <= " + ks(f.e_max) + ", " + s_part;
      }
      families.push_back(std::move(f));
      i = j;
    }
  }
  std::sort(families.begin(), families.end(),
            [](const Family& a, const Family& b) { return a.members.front() < b.members.front(); });
  return families;
}

LinkAnalysis analyze_link(const LinkContext& ctx, const AnalyzeOptions& options, TargetTables& tables) {
  LinkAnalysis out;
  const int k = options.drive_k > 0 ? options.drive_k : ctx.k0;
  out.drive_k = k;
  const int q = ctx.nt.q;
  auto& tr = out.trace;
  const auto& bf = ctx.beta_floor;

  tr.push_back("X: q = " + ks(q) + ", basket {" + ctx.nt.basket.str() + "}, A^3 = " + ctx.nt.A3.str() +
               ", movable system |" + ks(ctx.k0) + "A| of dimension " + ks(ctx.nt.dim(ctx.k0)));
  if (dim_one_empty(ctx)) tr.emplace_back("dim|A| = -1, so d >= 2 whenever the link is birational");

  if (ctx.center.quotient()) {
    const int r = ctx.center.r;
    const auto inv = mod_inverse(q, r);
    std::vector<std::string> tk;
    for (const auto& [kk, t] : ctx.t) {
      if (kk <= std::max({k, ctx.k0, options.refine_kmax})) tk.push_back("t_" + ks(kk) + " = " + ks(t));
    }
    tr.push_back("centre: point of index " + ks(r) + ", alpha = 1/" + ks(r) + ", A ~ -" + ks(static_cast<int>(inv)) +
                 "K_X near it: " + join(tk, ", "));
    tr.push_back("canonical threshold: |" + ks(ctx.k0) + "A| ~ -" + ks(bf.t_star) + "K_X near an index-" +
                 ks(bf.witness_r) + " point, so beta_" + ks(ctx.k0) + " >= " + ks(bf.t_star) + " alpha = " +
                 bf.value.str());
    const auto res = beta_residue(ctx, k);
    tr.push_back("beta_" + ks(k) + " = " + res.fractional.str() + " + m_" + ks(k) + " with m_" + ks(k) +
                 " >= " + ks(res.m_min));
    tr.push_back("key equality at k = " + ks(k) + ": " + equality_text(ctx, k));
    const std::int64_t w0 = ctx.c(k) + std::int64_t{q} * res.m_min;
    if (w0 > 0) {
      const std::int64_t lhs = std::int64_t{k} * kMaxFanoIndex;
      tr.push_back("bounds: qhat <= " + ks(kMaxFanoIndex) + " gives e <= " + ks(static_cast<int>(lhs / w0)) + ", m_" +
                   ks(k) + " <= " + ks(floor_div(lhs - ctx.c(k), q)) + ", s_" + ks(k) + " <= " +
                   ks(static_cast<int>((lhs - w0) / q)));
    }
  } else {
    const std::int64_t g = std::int64_t{q} * bf.t_star - ctx.k0;
    tr.push_back("centre: " + std::string(ctx.center.kind == Center::Kind::Curve ? "curve" : "Gorenstein point") +
                 ", alpha and beta_" + ks(ctx.k0) + " are integers, alpha >= 1");
    tr.push_back("canonical threshold: beta_" + ks(ctx.k0) + " >= " + ks(bf.t_star) + " alpha (index-" +
                 ks(bf.witness_r) + " point), so " + ks(q) + " beta_" + ks(ctx.k0) + " - " + ks(ctx.k0) +
                 " alpha >= " + std::to_string(g) + " alpha");
    if (k == ctx.k0 && g > 0) {
      std::int64_t s_min = 0;
      std::int64_t e_min = 1;
      int bound = ceil_div(g, k);
      tr.push_back(ks(k) + " qhat >= " + ks(q) + " s_" + ks(k) + " + " + std::to_string(g) + " alpha e >= " +
                   std::to_string(g) + ", so qhat >= " + ks(bound));
      if (bound >= 4 && ctx.nt.dim(k) != 0) {
        s_min = 1;
        bound = ceil_div(q * s_min + g * e_min, k);
        tr.push_back("qhat >= 4: birational, s_" + ks(k) + " >= 1 as dim|" + ks(k) + "A| = " + ks(ctx.nt.dim(k)) +
                     ", so qhat >= " + ks(bound));
      }
      if (bound >= 8 && dim_one_empty(ctx)) {
        e_min = 2;
        bound = ceil_div(q * s_min + g * e_min, k);
        tr.push_back("qhat >= 8: Cl(X^) torsion-free, e = d >= 2, so qhat >= " + ks(bound));
      }
      std::vector<std::string> left;
      for (const int qh : kFanoIndices) {
        if (qh >= bound) left.push_back(ks(qh));
      }
      if (left.empty()) {
        tr.push_back("qhat >= " + ks(bound) + " > " + ks(kMaxFanoIndex) + ": no admissible Fano index");
      } else {
        tr.push_back("remaining qhat in {" + join(left, ",") + "}: checked exactly over integer alpha, beta");
      }
    }
  }

  out.cases = key_equality_cases(ctx, k, tables);
  if (!ctx.center.quotient() && out.cases.empty()) tr.emplace_back("no integral solution: the centre is excluded");

  std::vector<int> steps = options.refine;
  if (steps.empty() && options.auto_refine) {
    for (int kk = 1; kk <= options.refine_kmax; ++kk) {
      if (kk != k && ctx.nt.dim(kk) >= 0) steps.push_back(kk);
    }
  }
  for (auto& c : out.cases) {
    evaluate_status(c, ctx, tables);
    for (const int kk : steps) {
      if (c.status == CaseStatus::Excluded) break;
      if (kk == k) continue;
      c = refine_case(std::move(c), ctx, kk, tables);
    }
  }
  out.families = group_families(out.cases, k);
  std::size_t excluded = 0;
  for (const auto& c : out.cases) excluded += c.status == CaseStatus::Excluded;
  tr.push_back(ks(static_cast<int>(out.cases.size())) + " cases in " + ks(static_cast<int>(out.families.size())) +
               " families; " + ks(static_cast<int>(excluded)) + " numerically excluded");
  for (const auto& c : out.cases) {
    if (c.status == CaseStatus::Excluded) tr.push_back(case_text(c, k) + " excluded: " + c.reason);
  }
  return out;
}

std::string AffineInC::str() const {
  // Common denominator: (a c + b) / d.
  const Integer d = boost::multiprecision::lcm(coeff.denominator(), constant.denominator());
  const Integer a = coeff.numerator() * (d / coeff.denominator());
  const Integer b = constant.numerator() * (d / constant.denominator());
  std::string num;
  if (a != 0) num = (a == 1 ? std::string() : a == -1 ? std::string("-") : a.str()) + "c";
  if (b != 0 || num.empty()) {
    if (num.empty()) {
      num = b.str();
    } else {
      num += b < 0 ? "-" : "+";
      const Integer mag = b < 0 ? Integer(-b) : b;
      num += mag.str();
    }
  }
  if (d == 1) return num;
  const bool wrap = a != 0 && b != 0;
  return (wrap ? "(" + num + ")" : num) + "/" + d.str();
}

AffineInC gamma_relation(int k, int s_k) {
  if (k < 1) throw DomainError("gamma relation needs k >= 1");
  if (k == 3) throw DomainError("gamma relation does not hold at k = 3");
  // -8s + 7k = 3cs - 21 gamma  =>  gamma = (3cs + 8s - 7k) / 21
  return {Rational(3 * std::int64_t{s_k}, 21), Rational(8 * std::int64_t{s_k} - 7 * std::int64_t{k}, 21)};
}

Rational gamma_relation(const Rational& c, int k, int s_k) { return gamma_relation(k, s_k).at(c); }

}  // namespace qfano
