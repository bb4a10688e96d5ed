#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfano/orbifold_rr.hpp"
#include "qfano/rational.hpp"
#include "qfano/tables.hpp"

namespace qfano {

/// Image of the exceptional divisor of the extremal blow-up.
struct Center {
  enum class Kind { Curve, GorensteinPoint, QuotientPoint };
  Kind kind = Kind::Curve;
  int r = 0;  // local index, QuotientPoint only

  /// "curve", "gorenstein" or "index:R". Throws ParseError.
  static Center parse(std::string_view text);
  std::string str() const;
  bool quotient() const { return kind == Kind::QuotientPoint; }
};

/// Lower bound beta_{k0} >= t* alpha from the canonical threshold, where t*
/// is the largest local multiple of |k0 A| over the non-Gorenstein points.
struct BetaFloor {
  int t_star = 0;
  int witness_r = 0;  // index of a point attaining t*
  Rational value;     // t* alpha; for curve and Gorenstein centres alpha = 1 is the minimum
};

struct LinkContext {
  FanoNumericalType nt;
  int k0 = 0;
  Center center;
  Rational alpha;                 // 1/r at a quotient point
  bool alpha_symbolic = false;    // integer alpha >= 1 at a curve or Gorenstein point
  std::map<int, int> t;           // local multiples t_k at the centre, quotient points only
  BetaFloor beta_floor;
  int kmax = 0;

  /// Validates the centre against the basket and precomputes t_k for k <= kmax.
  /// Throws DomainError when |k0 A| is not movable, the index is absent
  /// from the basket, or the basket has no non-Gorenstein point.
  static LinkContext make(FanoNumericalType nt, int k0, Center center, int kmax = 12);

  /// Integer part q t_k - k over r, so that q beta_k - k alpha = c_k + q m_k.
  int c(int k) const;
  /// Smallest admissible m_k (raised at k0 by the canonical threshold).
  int m_min(int k) const;
};

/// t_k = k q^{-1} mod r for k = 1..kmax.
std::map<int, int> local_multiples(int q, int r, int kmax);

BetaFloor ct_beta_floor(const LinkContext& ctx);

struct BetaResidue {
  Rational fractional;  // t_k / r
  int m_min = 0;
};

/// beta_k = t_k/r + m_k with m_k >= m_min. Quotient centres only.
BetaResidue beta_residue(const LinkContext& ctx, int k);

enum class CaseStatus { Survivor, Excluded, InsufficientData };
std::string_view status_name(CaseStatus s);

/// Outcome of one geometric alternative for the far side of the link.
struct Branch {
  enum class Kind { NonBirational, TorsionFree, Torsion };
  Kind kind;
  CaseStatus verdict = CaseStatus::Survivor;
  std::string reason;
  std::vector<std::string> candidates;  // rows of the target table still compatible
};
std::string_view branch_name(Branch::Kind k);

struct CaseSolution {
  int q_hat = 0;
  int e = 0;
  std::map<int, int> s;  // k -> s_k, where determined
  std::map<int, int> m;  // k -> m_k, where determined
  std::map<int, std::vector<std::pair<int, int>>> options;  // k -> admissible (s_k, m_k)
  std::optional<int> alpha;  // curve and Gorenstein centres
  std::optional<int> beta;   // beta_{k0} for curve and Gorenstein centres
  bool torsion_free_required = false;
  std::string d_constraint;
  CaseStatus status = CaseStatus::Survivor;
  std::string reason;
  std::vector<Branch> branches;
  std::vector<std::string> metadata;
  std::vector<std::string> trace;

  int drive_s(int k) const { return s.at(k); }
};

/// Candidate data for the far-side Fano X^: torsion-free types from the
/// enumerator (q^ >= 6, b_X < 3) and the stored torsion table.
class TargetTables {
 public:
  explicit TargetTables(const GoldenTable& torsion_table);

  const std::vector<FanoNumericalType>& torsion_free(int q_hat);
  std::vector<GoldenRow> torsion(int q_hat) const;

 private:
  GoldenTable torsion_;
  std::map<int, std::vector<FanoNumericalType>> torsion_free_;
  std::mutex mutex_;
};

/// All (q^, e, s_k, m_k) solving k q^ = q s_k + (q beta_k - k alpha) e at
/// k = drive_k under the list constraints: q^ >= 4 forces s_k > 0 unless
/// dim|kA| = 0, and q^ >= 8 forces a torsion-free X^ (e >= 2 when dim|A| = -1,
/// plus a dimension-compatible row in the target table). Statuses are not
/// evaluated here. Sorted by (q^, e, s, m).
std::vector<CaseSolution> key_equality_cases(const LinkContext& ctx, int drive_k, TargetTables& tables);

/// Solves the key equality at k for the case's (q^, e), records the
/// admissible (s_k, m_k) and re-evaluates the status.
CaseSolution refine_case(CaseSolution c, const LinkContext& ctx, int k, TargetTables& tables);

/// Evaluates branch verdicts and the case status from the recorded data.
void evaluate_status(CaseSolution& c, const LinkContext& ctx, TargetTables& tables);

/// Cases grouped as in a bullet list: same q^ - e and consecutive e.
struct Family {
  std::string label;
  int offset = 0;
  int e_min = 0;
  int e_max = 0;
  std::vector<int> s_values;
  std::vector<std::size_t> members;  // positions in LinkAnalysis::cases
};

std::vector<Family> group_families(const std::vector<CaseSolution>& cases, int drive_k);

struct AnalyzeOptions {
  int drive_k = 0;           // 0 means k0
  std::vector<int> refine;   // explicit refinement steps, applied in order
  int refine_kmax = 6;       // automatic refinement over 1..refine_kmax when `refine` is empty
  bool auto_refine = true;
};

struct LinkAnalysis {
  int drive_k = 0;
  std::vector<CaseSolution> cases;
  std::vector<Family> families;
  std::vector<std::string> trace;
};

LinkAnalysis analyze_link(const LinkContext& ctx, const AnalyzeOptions& options, TargetTables& tables);

/// gamma_k as an affine function of the threshold c.
struct AffineInC {
  Rational coeff;
  Rational constant;

  Rational at(const Rational& c) const { return coeff * c + constant; }
  /// "(c-2)/7" style.
  std::string str() const;
  friend bool operator==(const AffineInC&, const AffineInC&) = default;
};

/// Solves -8 s_k + 7k = 3(c s_k - 7 gamma_k) for gamma_k. Throws DomainError for k = 3 or k < 1.
AffineInC gamma_relation(int k, int s_k);
Rational gamma_relation(const Rational& c, int k, int s_k);

}  // namespace qfano
