#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace qfano {

using Integer = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision rational number.
///
/// Always stored normalized: the denominator is positive and coprime to the
/// numerator. Values are immutable from the outside; arithmetic returns new
/// values, so instances can be shared freely between threads.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const Integer& n) : value_(n) {}
  Rational(const Integer& num, const Integer& den);
  Rational(std::int64_t num, std::int64_t den) : Rational(Integer(num), Integer(den)) {}

  /// Parses "p/q" or "p" (optional sign, surrounding whitespace ignored).
  static Rational parse(std::string_view text);

  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_integer() const { return denominator() == 1; }
  int sign() const { return value_.sign(); }

  /// Largest integer <= *this.
  Integer floor() const;
  /// Smallest integer >= *this.
  Integer ceil() const;

  /// Converts an integral value to int64; throws DomainError otherwise.
  std::int64_t to_int64() const;

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  /// Decimal expansion truncated toward zero after `digits` places, with
  /// trailing zeros (and a bare trailing point) removed: 2.25, 0.4736, 1.
  std::string truncated_decimal(int digits) const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { Rational r; r.value_ = -a.value_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  boost::multiprecision::cpp_rational value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace qfano
