#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfano/orbifold_rr.hpp"
#include "qfano/rational.hpp"

namespace qfano {

/// Fano indices that can occur for terminal Q-Fano threefolds.
inline constexpr std::array<int, 13> kFanoIndices{1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 17, 19};

/// The subset where the degree formula applies (q >= 3).
inline constexpr std::array<int, 11> kSearchIndices{3, 4, 5, 6, 7, 8, 9, 11, 13, 17, 19};

bool is_fano_index(int q);

struct SearchConfig {
  std::vector<int> q_set{kSearchIndices.begin(), kSearchIndices.end()};
  std::optional<Rational> bx_min;         // keep b_X >= bx_min
  std::optional<Rational> bx_max_strict;  // keep b_X < bx_max_strict
  bool apply_clubsuit = false;
  int kmax_dims = 9;
  int jobs = 1;

  /// Throws DomainError for indices outside kSearchIndices, kmax < 1 or jobs < 1.
  void validate() const;
};

struct ClubsuitBound {
  Rational bound;
  bool strict = false;
};

/// Upper bound on b_X by Fano index: 64/21 (q = 4), 25/8 (q = 5), < 3 otherwise.
ClubsuitBound clubsuit_bound(int q);
bool satisfies_clubsuit(int q, const Rational& bX);

/// Visits every basket with sum(r - 1/r) < 24 exactly once, in lexicographic
/// order of the sorted point sequence (the empty basket first).
void for_each_basket(const std::function<void(const Basket&)>& visit);
std::vector<Basket> enumerate_baskets();

struct CandidateRow {
  FanoNumericalType type;
  /// Other twist assignments with the same q, R_X and displayed invariants.
  std::vector<Basket> alternates;
  /// Filters the row passed, in application order.
  std::vector<std::string> filters;
  /// Another row shares (q, R_X) but differs in a displayed invariant.
  bool b_ambiguous = false;

  std::vector<int> indices() const { return type.basket.indices(); }
};

/// Sort order of candidate rows: q, then R_X, then the full basket.
bool row_less(const CandidateRow& a, const CandidateRow& b);

/// Runs the search over all admissible baskets for each q in the config.
/// Output is sorted and independent of config.jobs.
std::vector<CandidateRow> enumerate_candidates(const SearchConfig& config);

}  // namespace qfano
