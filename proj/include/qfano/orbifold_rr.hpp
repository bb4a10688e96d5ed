#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfano/rational.hpp"

namespace qfano {

/// A cyclic quotient point of type 1/r(1, -1, b) in a singularity basket.
struct OrbifoldPoint {
  int r = 2;
  int b = 1;

  /// r >= 2, 0 < b <= r/2 and gcd(b, r) = 1.
  static bool valid(int r, int b);

  friend auto operator<=>(const OrbifoldPoint&, const OrbifoldPoint&) = default;
};

/// Multiset of orbifold points, kept sorted by (r, b).
class Basket {
 public:
  Basket() = default;
  /// Validates every point and sorts; throws DomainError on an invalid point.
  explicit Basket(std::vector<OrbifoldPoint> points);

  std::span<const OrbifoldPoint> points() const { return points_; }
  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }

  /// The local indices R_X, sorted, with multiplicity.
  std::vector<int> indices() const;
  /// r_X = lcm(R_X); 1 for the empty basket.
  std::int64_t gorenstein_index() const;
  /// Sum over points of (r - 1/r).
  Rational sigma() const;

  /// "7:2,13:6"; the empty basket renders as "".
  std::string str() const;

  friend auto operator<=>(const Basket&, const Basket&) = default;
  friend bool operator==(const Basket&, const Basket&) = default;

 private:
  std::vector<OrbifoldPoint> points_;
};

/// Parses "r:b,r:b,..." into a basket. Throws ParseError on malformed syntax.
Basket parse_basket(std::string_view text);

/// Parses either the full "r:b,..." form or the index-only "r,r,..." form.
/// The index-only form expands to every valid assignment of twists,
/// deduplicated and in ascending order.
std::vector<Basket> parse_basket_or_indices(std::string_view text);

/// All baskets with the given local indices (one per multiset of twists).
std::vector<Basket> baskets_with_indices(std::span<const int> indices);

/// "{3,7^2}" style rendering of a local index multiset.
std::string format_indices(std::span<const int> indices);

/// Numerical data of a terminal Fano threefold with -K ~ qA.
struct FanoNumericalType {
  int q = 0;
  Basket basket;
  Rational A3;
  Rational c2c1;
  Rational c1cubed;
  Rational bX;
  std::vector<int> dims;  // dims[k-1] = dim|kA| for k = 1..kmax

  /// Derives every field from (q, basket) via the Riemann-Roch specializations.
  /// Requires q >= 3 and gcd(r_X, q) = 1; does not run the consistency filters.
  static FanoNumericalType from_basket(int q, Basket basket, int kmax = 9);

  /// Builds a type with a given degree (for q < 3 or external A^3 values).
  static FanoNumericalType with_degree(int q, Basket basket, Rational A3, int kmax = 9);

  /// dim|kA| for k >= 1, computed on demand past the stored range.
  int dim(int k) const;
};

/// 24 - sum(r - 1/r). Non-positive results mean the basket is not admissible.
Rational c2c1_from_basket(const Basket& basket);

/// The unique i in [0, r) with q*i = -t (mod r).
int i_index(int q, int r, int t);

/// Local correction term c_Q(tA) of the orbifold Riemann-Roch formula.
Rational c_Q(const OrbifoldPoint& point, int q, int t);

/// chi(tA) from the orbifold Riemann-Roch formula.
Rational chi(int q, const Basket& basket, const Rational& A3, const Rational& c2c1, int t);
Rational chi(const FanoNumericalType& nt, int t);

/// A^3 from chi(-A) = 0. Throws DomainError for q < 3.
Rational A3_from(int q, const Basket& basket, const Rational& c2c1);

/// dim|kA| = chi(kA) - 1 for k = 1..kmax. Throws InconsistentTypeError when
/// some chi(kA) is not an integer.
std::vector<int> dims(const FanoNumericalType& nt, int kmax);

struct VanishingCheck {
  bool pass = true;
  std::optional<int> failing_t;
};

/// chi(tA) = 0 for every -q < t < 0.
VanishingCheck check_vanishing(const FanoNumericalType& nt);

struct IntegralityCheck {
  bool pass = true;
  std::vector<std::string> reasons;
};

/// gcd(r_X, q) = 1 and r_X * A3 a positive integer.
IntegralityCheck check_integrality(int q, const Basket& basket, const Rational& A3);

/// c1^3 / c2c1. Throws DomainError when c2c1 <= 0.
Rational bX_of(const FanoNumericalType& nt);

/// Coefficient of A^n in the destabilizing-foliation bound
/// (2(n-1)c1 - n c1(F)) c1(F) c1^{n-2} / (2(n-1)) with c1 = qA, c1(F) = fA.
Rational foliation_threshold(int n, int q, int f);

/// True when c2c1 <= foliation_threshold(3, q, f) * A3, i.e. a rank-two
/// destabilizing foliation with c1(F) = fA cannot exist.
bool foliation_excluded(const FanoNumericalType& nt, int f);

}  // namespace qfano
