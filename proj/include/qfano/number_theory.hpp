#pragma once

#include <cstdint>
#include <span>

namespace qfano {

/// Non-negative residue of a modulo n (n >= 1).
inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

/// The unique x in [1, n) with a*x = 1 (mod n).
///
/// Throws InvalidPairError when gcd(a, n) != 1 and DomainError when n < 2.
std::int64_t mod_inverse(std::int64_t a, std::int64_t n);

/// Least common multiple of the values; the empty collection gives 1, which
/// is the Gorenstein index of a basket without orbifold points.
std::int64_t lcm_of(std::span<const int> values);

}  // namespace qfano
