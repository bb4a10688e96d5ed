#pragma once

#include <stdexcept>
#include <string>

namespace qfano {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A (q, r) pair with gcd(q, r) != 1, or a non-invertible residue.
class InvalidPairError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a formula (q < 3 in the degree formula, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical type whose Riemann-Roch values are not integral where they must be.
class InconsistentTypeError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input: rational literals, basket syntax, fixture files.
class ParseError : public Error {
 public:
  using Error::Error;
};

class FixtureError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfano
