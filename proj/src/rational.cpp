#include "qfano/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>

#include "qfano/errors.hpp"

namespace qfano {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s, std::string_view whole, bool allow_sign) {
  if (s.empty()) throw ParseError("invalid rational literal '" + std::string(whole) + "'");
  std::size_t pos = 0;
  bool negative = false;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw ParseError("invalid rational literal '" + std::string(whole) + "'");
  Integer value = 0;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c < '0' || c > '9') {
      throw ParseError("invalid rational literal '" + std::string(whole) +
                       "' (expected p/q or p with decimal integers)");
    }
    value = value * 10 + (c - '0');
  }
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  // Boost rejects a negative denominator outright.
  value_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den) : boost::multiprecision::cpp_rational(num, den);
}

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s, text, true));
  const Integer num = parse_integer(trim(s.substr(0, slash)), text, true);
  const Integer den = parse_integer(trim(s.substr(slash + 1)), text, false);
  if (den == 0) throw ParseError("invalid rational literal '" + std::string(text) + "' (zero denominator)");
  return Rational(num, den);
}

Integer Rational::floor() const {
  const Integer n = numerator();
  const Integer d = denominator();
  Integer q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

Integer Rational::ceil() const {
  const Integer n = numerator();
  const Integer d = denominator();
  Integer q = n / d;
  if (n > 0 && q * d != n) q += 1;
  return q;
}

std::int64_t Rational::to_int64() const {
  if (!is_integer()) throw DomainError("expected an integer, got " + str());
  const Integer n = numerator();
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min()) {
    throw DomainError("integer out of 64-bit range: " + str());
  }
  return static_cast<std::int64_t>(n);
}

std::string Rational::str() const {
  if (is_integer()) return numerator().str();
  return numerator().str() + "/" + denominator().str();
}

std::string Rational::truncated_decimal(int digits) const {
  const Integer n = numerator();
  const Integer d = denominator();
  const bool negative = n < 0;
  const Integer a = negative ? Integer(-n) : n;
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const Integer scaled = a * scale / d;
  const Integer whole = scaled / scale;
  std::string frac = Integer(scaled % scale).str();
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += whole.str();
  if (!frac.empty()) out += "." + frac;
  return out;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_ == 0) throw DomainError("division by zero");
  value_ /= o.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace qfano
