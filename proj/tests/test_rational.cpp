#include <gtest/gtest.h>

#include <cmath>

#include "dmlab/enclosure.hpp"
#include "dmlab/error.hpp"
#include "dmlab/rational.hpp"

using namespace dmlab;

TEST(Rational, ParseForms) {
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_rational(" -2/4 "), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Rational, ToStringIsNumSlashDen) {
  EXPECT_EQ(to_string(Rational(2)), "2/1");
  EXPECT_EQ(to_string(fraction(64, 64)), "1/1");
  EXPECT_EQ(to_string(fraction(6, -4)), "-3/2");
  EXPECT_THROW(fraction(1, 0), Error);
}

TEST(Rational, FloorCeilLog2) {
  EXPECT_EQ(floor(Rational(-1, 2)), -1);
  EXPECT_EQ(ceil(Rational(-1, 2)), 0);
  EXPECT_EQ(floor_log2(Rational(1, 3)), -2);
  EXPECT_EQ(floor_log2(Rational(8)), 3);
  EXPECT_EQ(pow2(-3), Rational(1, 8));
  EXPECT_EQ(pow(Rational(2, 3), -2), Rational(9, 4));
}

TEST(Rational, ComparePowAgainstDoubles) {
  // N^(-R) versus a gap, checked against floating point away from ties.
  for (int N = 1; N <= 40; ++N) {
    Rational gap(1, 7);
    double lhs = std::pow(N, -0.5);
    int expect = lhs < 1.0 / 7 ? -1 : 1;
    EXPECT_EQ(compare_pow(Rational(N), Rational(-1, 2), gap), expect) << N;
  }
  EXPECT_EQ(compare_pow(Rational(4), Rational(-1, 2), Rational(1, 2)), 0);
}

TEST(Enclosure, ExactCasesStayExact) {
  EXPECT_TRUE(enclose::log2(Rational(1, 8)).is_exact());
  EXPECT_EQ(enclose::log2(Rational(1, 8)).lo, -3);
  auto r = enclose::pow(Rational(9, 4), Rational(3, 2));
  EXPECT_TRUE(r.is_exact());
  EXPECT_EQ(r.lo, Rational(27, 8));
  EXPECT_EQ(enclose::exp2(Enclosure::exact(Rational(5))).lo, 32);
}

TEST(Enclosure, InexactValuesAreEnclosed) {
  for (int k = 2; k < 30; ++k) {
    Rational x = fraction(k, 7);
    auto l = enclose::log2(x);
    double v = std::log2(k / 7.0);
    EXPECT_LE(to_double(l.lo), v + 1e-15);
    EXPECT_GE(to_double(l.hi), v - 1e-15);
    EXPECT_LT(l.hi - l.lo, Rational(1, 1000000000));
    auto e = enclose::exp(Enclosure::exact(-x));
    EXPECT_LE(to_double(e.lo), std::exp(-k / 7.0) * (1 + 1e-15));
    EXPECT_GE(to_double(e.hi), std::exp(-k / 7.0) * (1 - 1e-15));
    auto p = enclose::pow(x, Rational(1, 3));
    EXPECT_LE(to_double(p.lo), std::cbrt(k / 7.0) * (1 + 1e-15));
    EXPECT_GE(to_double(p.hi), std::cbrt(k / 7.0) * (1 - 1e-15));
  }
}

TEST(Enclosure, ArithmeticIsInclusionMonotone) {
  Enclosure a(Rational(-1, 2), Rational(1, 3)), b(Rational(2), Rational(5, 2));
  auto m = a * b;
  EXPECT_EQ(m.lo, Rational(-5, 4));
  EXPECT_EQ(m.hi, Rational(5, 6));
  auto d = b / Enclosure(Rational(1, 2), Rational(1));
  EXPECT_EQ(d.lo, 2);
  EXPECT_EQ(d.hi, 5);
  EXPECT_THROW(b / a, Error);
}

TEST(Enclosure, OutwardRoundingKeepsContainment) {
  Enclosure e = enclose::pow(Rational(3), Rational(1, 7));
  for (int i = 0; i < 6; ++i) e = e * e + e;  // grow the rational sizes
  Enclosure o = enclose::outward(e, 64);
  EXPECT_LE(o.lo, e.lo);
  EXPECT_GE(o.hi, e.hi);
  EXPECT_LE(mpz_sizeinbase(o.hi.get_den_mpz_t(), 2), 4u * 64u + 64u);
}
