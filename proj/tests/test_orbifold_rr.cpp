#include <doctest.h>

#include <numeric>

#include "oracle.hpp"
#include "qfano/errors.hpp"
#include "qfano/orbifold_rr.hpp"

using namespace qfano;

namespace {

Rational from_oracle(const oracle::Q& x) {
  return Rational(boost::multiprecision::numerator(x), boost::multiprecision::denominator(x));
}

std::vector<oracle::Pt> pts_of(const Basket& b) {
  std::vector<oracle::Pt> out;
  for (const auto& p : b.points()) out.emplace_back(p.r, p.b);
  return out;
}

}  // namespace

TEST_SUITE("orbifold-rr") {

TEST_CASE("basket parsing") {
  const auto b = parse_basket("13:6, 7:2");
  CHECK(b.str() == "7:2,13:6");
  CHECK(b.indices() == std::vector<int>{7, 13});
  CHECK(b.gorenstein_index() == 91);
  CHECK(parse_basket("").empty());
  CHECK_THROWS_AS(parse_basket("7:3:1"), ParseError);
  CHECK_THROWS_AS(parse_basket("7-2"), ParseError);
  CHECK_THROWS_AS(parse_basket("6:3"), ParseError);  // gcd(b, r) != 1
  CHECK_THROWS_AS(parse_basket("7:4"), ParseError);  // b > r/2
  CHECK_THROWS_AS(Basket({{4, 2}}), DomainError);
}

TEST_CASE("index-only baskets expand to every twist") {
  const auto all = parse_basket_or_indices("7,13");
  CHECK(all.size() == 3 * 6);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(parse_basket_or_indices("7:2,13:6").size() == 1);
  // {7,7}: multisets of twists, not ordered pairs.
  CHECK(parse_basket_or_indices("7,7").size() == 6);
  CHECK(format_indices(parse_basket("3:1,7:2,7:3").indices()) == "{3,7^2}");
}

TEST_CASE("i_index") {
  CHECK(i_index(4, 7, -1) == 2);
  CHECK(i_index(4, 13, -4) == 1);
  CHECK(i_index(5, 7, 0) == 0);
  CHECK(i_index(5, 7, 14) == 0);
  CHECK_THROWS_AS(i_index(4, 6, 1), InvalidPairError);
  for (int r = 2; r <= 30; ++r) {
    for (int q = 1; q <= 19; ++q) {
      if (std::gcd(q, r) != 1) continue;
      for (int t = -2 * q; t <= 2 * q; ++t) REQUIRE(i_index(q, r, t) == oracle::i_index(q, r, t));
    }
  }
}

TEST_CASE("c_Q equals the literal summation") {
  // r <= 30, every valid b, q <= 19 coprime to r, |t| <= 2q.
  std::size_t n = 0;
  for (int r = 2; r <= 30; ++r) {
    for (int b = 1; 2 * b <= r; ++b) {
      if (std::gcd(r, b) != 1) continue;
      for (int q = 1; q <= 19; ++q) {
        if (std::gcd(q, r) != 1) continue;
        for (int t = -2 * q; t <= 2 * q; ++t) {
          REQUIRE(c_Q({r, b}, q, t) == from_oracle(oracle::c_Q(r, b, q, t)));
          ++n;
        }
      }
    }
  }
  CHECK(n > 70000);
}

TEST_CASE("c_Q at t = -q") {
  for (int r = 2; r <= 30; ++r) {
    for (int b = 1; 2 * b <= r; ++b) {
      if (std::gcd(r, b) != 1) continue;
      for (int q = 1; q <= 19; ++q) {
        if (std::gcd(q, r) != 1) continue;
        CHECK(c_Q({r, b}, q, -q) == Rational(-(r * r - 1), 12 * r));
      }
    }
  }
}

TEST_CASE("c2c1 from the basket") {
  CHECK(c2c1_from_basket(Basket{}) == Rational(24));
  CHECK(c2c1_from_basket(parse_basket("3:1,5:2,11:4")) == Rational(928, 165));
  CHECK(c2c1_from_basket(parse_basket("3:1,3:1,3:1,3:1,6:1")) == Rational(15, 2));
  // Strictly decreasing when a point is added.
  const Basket base = parse_basket("2:1,5:2");
  for (int r = 2; r <= 24; ++r) {
    for (int b = 1; 2 * b <= r; ++b) {
      if (std::gcd(r, b) != 1) continue;
      std::vector<OrbifoldPoint> pts(base.points().begin(), base.points().end());
      pts.push_back({r, b});
      CHECK(c2c1_from_basket(Basket(pts)) < c2c1_from_basket(base));
    }
  }
}

TEST_CASE("degree formula") {
  CHECK(A3_from(4, parse_basket("7:2,13:6"), Rational(384, 91)) == Rational(18, 91));
  const auto b8 = parse_basket("3:1,5:2,11:4");
  CHECK(A3_from(8, b8, c2c1_from_basket(b8)) == Rational(4, 165));
  const auto b5 = parse_basket("3:1,7:2,7:3");
  CHECK(A3_from(5, b5, c2c1_from_basket(b5)) == Rational(4, 21));
  CHECK_THROWS_AS(A3_from(2, b5, Rational(1)), DomainError);
  CHECK_THROWS_AS(A3_from(7, b5, c2c1_from_basket(b5)), InvalidPairError);
}

TEST_CASE("q = 4 type with points of index 7 and 13") {
  const auto nt = FanoNumericalType::from_basket(4, parse_basket("7:2,13:6"));
  CHECK(nt.A3 == Rational(18, 91));
  CHECK(nt.c1cubed == Rational(1152, 91));
  CHECK(nt.c2c1 == Rational(384, 91));
  CHECK(nt.bX == Rational(3));
  CHECK(std::vector<int>(nt.dims.begin(), nt.dims.begin() + 4) == std::vector<int>{-1, 1, 3, 6});
  CHECK(chi(nt, 0) == Rational(1));
  CHECK(chi(nt, 2) == Rational(2));
  CHECK(chi(nt, -1) == Rational(0));
  CHECK(chi(nt, -4) == Rational(-1));
  // c_Q at the index-7 point for t = -1, cross-checked against the vanishing it must produce.
  const Rational v1 = c_Q({7, 2}, 4, -1);
  CHECK(v1 == from_oracle(oracle::c_Q(7, 2, 4, -1)));
  CHECK(Rational(1) + Rational(-1 * 3 * 2, 12) * nt.A3 + Rational(-1, 48) * nt.c2c1 + v1 + c_Q({13, 6}, 4, -1) ==
        Rational(0));
  CHECK(check_vanishing(nt).pass);
  CHECK(check_integrality(4, nt.basket, nt.A3).pass);
}

TEST_CASE("q = 8 type with points of index 3, 5, 11") {
  const auto nt = FanoNumericalType::from_basket(8, parse_basket("3:1,5:2,11:4"));
  CHECK(nt.A3 == Rational(4, 165));
  CHECK(nt.c1cubed == Rational(2048, 165));
  CHECK(nt.c2c1 == Rational(928, 165));
  CHECK(nt.bX == Rational(64, 29));
  CHECK(std::vector<int>(nt.dims.begin(), nt.dims.begin() + 6) == std::vector<int>{-1, 0, 0, 1, 2, 3});
  CHECK(nt.dim(12) == from_oracle(oracle::chi(8, pts_of(nt.basket), oracle::frac(4, 165), oracle::frac(928, 165), 12) - 1)
                          .to_int64());
}

TEST_CASE("q = 5 type with points of index 3, 7, 7") {
  const auto nt = FanoNumericalType::from_basket(5, parse_basket("3:1,7:2,7:3"));
  CHECK(nt.c1cubed == Rational(500, 21));
  CHECK(nt.c2c1 == Rational(160, 21));
  CHECK(nt.bX == Rational(25, 8));
}

TEST_CASE("inconsistent types are rejected") {
  CHECK_THROWS_AS(FanoNumericalType::from_basket(4, parse_basket("7:1,13:2")), InconsistentTypeError);
  const auto nt = FanoNumericalType::with_degree(4, parse_basket("7:2,13:6"), Rational(1, 91), 0);
  const auto v = check_vanishing(nt);
  CHECK_FALSE(v.pass);
  REQUIRE(v.failing_t);
  CHECK(*v.failing_t < 0);
  const auto ic = check_integrality(4, parse_basket("7:2,13:6"), Rational(1, 182));
  CHECK_FALSE(ic.pass);
  CHECK_FALSE(check_integrality(7, parse_basket("7:2"), Rational(1)).pass);
}

TEST_CASE("foliation threshold") {
  CHECK(foliation_threshold(3, 5, 4) == Rational(40));
  const auto nt = FanoNumericalType::from_basket(5, parse_basket("3:1,7:2,7:3"));
  // The strict inequality c2c1 > 40 A3 fails, with equality.
  CHECK(nt.c2c1 == Rational(40) * nt.A3);
  CHECK_FALSE(nt.c2c1 > Rational(40) * nt.A3);
  CHECK(foliation_excluded(nt, 4));
  CHECK_THROWS_AS(foliation_threshold(2, 5, 4), DomainError);
}

}
