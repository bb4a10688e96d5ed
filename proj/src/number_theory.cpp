#include "qfano/number_theory.hpp"

#include <numeric>
#include <string>

#include "qfano/errors.hpp"

namespace qfano {

std::int64_t mod_inverse(std::int64_t a, std::int64_t n) {
  if (n < 2) throw DomainError("mod_inverse: modulus must be >= 2, got " + std::to_string(n));
  // Extended Euclid on (a mod n, n).
  std::int64_t old_r = mod(a, n), r = n;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quotient = old_r / r;
    std::int64_t tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) {
    throw InvalidPairError("gcd(" + std::to_string(a) + ", " + std::to_string(n) +
                           ") != 1: the index and the Fano index must be coprime");
  }
  return mod(old_s, n);
}

std::int64_t lcm_of(std::span<const int> values) {
  std::int64_t result = 1;
  for (const int v : values) {
    if (v < 1) throw DomainError("lcm_of: values must be positive, got " + std::to_string(v));
    result = std::lcm(result, static_cast<std::int64_t>(v));
  }
  return result;
}

}  // namespace qfano
