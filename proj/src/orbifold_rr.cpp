#include "qfano/orbifold_rr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <set>

#include "qfano/errors.hpp"
#include "qfano/number_theory.hpp"

namespace qfano {

bool OrbifoldPoint::valid(int r, int b) {
  return r >= 2 && b > 0 && 2 * b <= r && std::gcd(r, b) == 1;
}

Basket::Basket(std::vector<OrbifoldPoint> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!OrbifoldPoint::valid(p.r, p.b)) {
      throw DomainError("invalid orbifold point " + std::to_string(p.r) + ":" + std::to_string(p.b) +
                        " (need r >= 2, 0 < b <= r/2, gcd(b, r) = 1)");
    }
  }
  std::sort(points_.begin(), points_.end());
}

std::vector<int> Basket::indices() const {
  std::vector<int> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.r);
  return out;
}

std::int64_t Basket::gorenstein_index() const {
  const auto idx = indices();
  return lcm_of(idx);
}

Rational Basket::sigma() const {
  Rational s;
  for (const auto& p : points_) s += Rational(std::int64_t{p.r} * p.r - 1, p.r);
  return s;
}

std::string Basket::str() const {
  std::string out;
  for (const auto& p : points_) {
    if (!out.empty()) out += ',';
    out += std::to_string(p.r) + ":" + std::to_string(p.b);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view token, std::string_view whole) {
  token = trim(token);
  int value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("malformed basket '" + std::string(whole) +
                     "': expected comma-separated r:b pairs (e.g. 7:2,13:6) or indices (e.g. 7,13)");
  }
  return value;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  s = trim(s);
  if (s.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    parts.push_back(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

Basket parse_basket(std::string_view text) {
  std::vector<OrbifoldPoint> pts;
  for (const auto part : split_commas(text)) {
    const auto colon = part.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("malformed basket '" + std::string(text) + "': entry '" + std::string(part) +
                       "' is missing ':b' (mixing r:b and index-only entries is not allowed)");
    }
    const int r = parse_int(part.substr(0, colon), text);
    const int b = parse_int(part.substr(colon + 1), text);
    if (!OrbifoldPoint::valid(r, b)) {
      throw ParseError("invalid orbifold point " + std::to_string(r) + ":" + std::to_string(b) +
                       " in basket '" + std::string(text) + "' (need r >= 2, 0 < b <= r/2, gcd(b, r) = 1)");
    }
    pts.push_back({r, b});
  }
  return Basket(std::move(pts));
}

std::vector<Basket> parse_basket_or_indices(std::string_view text) {
  if (text.find(':') != std::string_view::npos) return {parse_basket(text)};
  std::vector<int> indices;
  for (const auto part : split_commas(text)) {
    const int r = parse_int(part, text);
    if (r < 2) throw ParseError("local index must be >= 2 in basket '" + std::string(text) + "'");
    indices.push_back(r);
  }
  return baskets_with_indices(indices);
}

std::vector<Basket> baskets_with_indices(std::span<const int> indices) {
  std::set<Basket> found;
  std::vector<OrbifoldPoint> current;
  auto recurse = [&](auto&& self, std::size_t pos) -> void {
    if (pos == indices.size()) {
      found.insert(Basket(current));
      return;
    }
    const int r = indices[pos];
    for (int b = 1; 2 * b <= r; ++b) {
      if (std::gcd(r, b) != 1) continue;
      current.push_back({r, b});
      self(self, pos + 1);
      current.pop_back();
    }
  };
  for (const int r : indices) {
    if (r < 2) throw DomainError("local index must be >= 2, got " + std::to_string(r));
  }
  recurse(recurse, 0);
  return {found.begin(), found.end()};
}

std::string format_indices(std::span<const int> indices) {
  std::vector<int> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out = "{";
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (i > 0) out += ',';
    out += std::to_string(sorted[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out + "}";
}

Rational c2c1_from_basket(const Basket& basket) { return Rational(24) - basket.sigma(); }

int i_index(int q, int r, int t) {
  const std::int64_t inv = mod_inverse(q, r);
  return static_cast<int>(mod(-static_cast<std::int64_t>(t) % r * inv, r));
}

Rational c_Q(const OrbifoldPoint& point, int q, int t) {
  const std::int64_t r = point.r;
  const std::int64_t i = i_index(q, point.r, t);
  // 12r * c_Q = -i(r^2 - 1) + 6 * sum_{j<i} x_j (r - x_j), x_j = jb mod r.
  std::int64_t sum = 0;
  std::int64_t x = 0;
  for (std::int64_t j = 0; j < i; ++j) {
    sum += x * (r - x);
    x += point.b;
    if (x >= r) x -= r;
  }
  return Rational(-i * (r * r - 1) + 6 * sum, 12 * r);
}

Rational chi(int q, const Basket& basket, const Rational& A3, const Rational& c2c1, int t) {
  if (q == 0) throw DomainError("chi: q must be non-zero");
  const std::int64_t tt = t;
  Rational value = Rational(1) + Rational(tt * (q + tt) * (q + 2 * tt), 12) * A3 +
                   Rational(tt, 12 * std::int64_t{q}) * c2c1;
  for (const auto& p : basket.points()) value += c_Q(p, q, t);
  return value;
}

Rational chi(const FanoNumericalType& nt, int t) { return chi(nt.q, nt.basket, nt.A3, nt.c2c1, t); }

Rational A3_from(int q, const Basket& basket, const Rational& c2c1) {
  if (q < 3) throw DomainError("A3_from: requires q >= 3 (the formula divides by (q-1)(q-2)), got q = " +
                               std::to_string(q));
  Rational corr = Rational(1) - c2c1 / Rational(12 * std::int64_t{q});
  for (const auto& p : basket.points()) corr += c_Q(p, q, -1);
  return Rational(12, std::int64_t{q - 1} * (q - 2)) * corr;
}

std::vector<int> dims(const FanoNumericalType& nt, int kmax) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::max(kmax, 0)));
  for (int k = 1; k <= kmax; ++k) {
    const Rational v = chi(nt, k) - Rational(1);
    if (!v.is_integer() || v < Rational(-1)) {
      throw InconsistentTypeError("chi(" + std::to_string(k) + "A) - 1 = " + v.str() +
                                  " is not an integer >= -1 for q = " + std::to_string(nt.q) +
                                  ", basket " + nt.basket.str());
    }
    out.push_back(static_cast<int>(v.to_int64()));
  }
  return out;
}

FanoNumericalType FanoNumericalType::from_basket(int q, Basket basket, int kmax) {
  const Rational c2c1 = c2c1_from_basket(basket);
  const Rational A3 = A3_from(q, basket, c2c1);
  return with_degree(q, std::move(basket), A3, kmax);
}

FanoNumericalType FanoNumericalType::with_degree(int q, Basket basket, Rational A3, int kmax) {
  FanoNumericalType nt;
  nt.q = q;
  nt.basket = std::move(basket);
  nt.c2c1 = c2c1_from_basket(nt.basket);
  nt.A3 = std::move(A3);
  nt.c1cubed = Rational(std::int64_t{q} * q * q) * nt.A3;
  nt.bX = bX_of(nt);
  nt.dims = qfano::dims(nt, kmax);
  return nt;
}

int FanoNumericalType::dim(int k) const {
  if (k < 1) throw DomainError("dim|kA| is defined for k >= 1");
  if (static_cast<std::size_t>(k) <= dims.size()) return dims[static_cast<std::size_t>(k - 1)];
  const Rational v = chi(*this, k) - Rational(1);
  if (!v.is_integer()) {
    throw InconsistentTypeError("chi(" + std::to_string(k) + "A) is not an integer for basket " + basket.str());
  }
  return static_cast<int>(v.to_int64());
}

VanishingCheck check_vanishing(const FanoNumericalType& nt) {
  for (int t = -1; t > -nt.q; --t) {
    if (chi(nt, t).sign() != 0) return {false, t};
  }
  return {};
}

IntegralityCheck check_integrality(int q, const Basket& basket, const Rational& A3) {
  IntegralityCheck out;
  const std::int64_t rX = basket.gorenstein_index();
  if (const auto g = std::gcd(rX, static_cast<std::int64_t>(q)); g != 1) {
    out.pass = false;
    out.reasons.push_back("gcd(r_X, q) = gcd(" + std::to_string(rX) + ", " + std::to_string(q) +
                          ") = " + std::to_string(g) + " != 1");
  }
  const Rational scaled = Rational(rX) * A3;
  if (!scaled.is_integer()) {
    out.pass = false;
    out.reasons.push_back("r_X * A3 = " + scaled.str() + " is not an integer");
  }
  if (A3.sign() <= 0) {
    out.pass = false;
    out.reasons.push_back("A3 = " + A3.str() + " is not positive");
  }
  return out;
}

Rational bX_of(const FanoNumericalType& nt) {
  if (nt.c2c1.sign() <= 0) throw DomainError("b_X undefined: c2c1 = " + nt.c2c1.str() + " is not positive");
  return nt.c1cubed / nt.c2c1;
}

Rational foliation_threshold(int n, int q, int f) {
  if (n < 3) throw DomainError("foliation_threshold: dimension must be >= 3");
  const std::int64_t m = n - 1;
  Rational power = 1;
  for (int i = 0; i < n - 2; ++i) power *= Rational(q);
  return Rational((2 * m * q - std::int64_t{n} * f) * f, 2 * m) * power;
}

bool foliation_excluded(const FanoNumericalType& nt, int f) {
  return nt.c2c1 <= foliation_threshold(3, nt.q, f) * nt.A3;
}

}  // namespace qfano
