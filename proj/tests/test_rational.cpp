#include <gtest/gtest.h>

#include <random>

#include "beiterlab/errors.hpp"
#include "beiterlab/rational.hpp"

using beiterlab::OverflowError;
using beiterlab::Rational;

TEST(Rational, Normalizes) {
  const Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(0, 5), Rational(0));
  EXPECT_EQ(Rational(0, 5).den(), 1);
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ArithmeticAndOrder) {
  const Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, b);
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_LT(b, a);
  EXPECT_LT(Rational(-7, 2), Rational(-3));
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(7, 2).ceil(), 4);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
  EXPECT_EQ(Rational(6).floor(), 6);
  EXPECT_EQ(Rational(6).ceil(), 6);
}

TEST(Rational, OrderMatchesCrossMultiplication) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20000; ++i) {
    const auto n1 = static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    const auto n2 = static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    const auto d1 = static_cast<std::int64_t>(rng() % 1000000) + 1;
    const auto d2 = static_cast<std::int64_t>(rng() % 1000000) + 1;
    const bool less = static_cast<__int128>(n1) * d2 < static_cast<__int128>(n2) * d1;
    ASSERT_EQ(Rational(n1, d1) < Rational(n2, d2), less);
  }
}

TEST(Rational, OverflowIsAnError) {
  const Rational big(INT64_MAX);
  EXPECT_THROW(big + Rational(1), OverflowError);
  EXPECT_THROW(big * Rational(2), OverflowError);
  EXPECT_THROW(Rational(1, INT64_MAX) * Rational(1, 3), OverflowError);
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(Rational::from_double(0.5), Rational(1, 2));
  EXPECT_EQ(Rational::from_double(-3.0), Rational(-3));
  EXPECT_EQ(Rational::from_double(0.1), Rational(3602879701896397, 36028797018963968));
  EXPECT_THROW(Rational::from_double(1e300), OverflowError);
}

TEST(Rational, CompareWithDouble) {
  using beiterlab::compare;
  const Rational third(1, 3);
  EXPECT_EQ(compare(third, 1.0 / 3), std::partial_ordering::greater);  // 1/3 rounds down in binary64
  EXPECT_EQ(compare(Rational(1, 2), 0.5), std::partial_ordering::equivalent);
  EXPECT_EQ(compare(Rational(2), 1.9999999999999998), std::partial_ordering::greater);
  EXPECT_EQ(compare(Rational(0), 1e-30), std::partial_ordering::less);
  EXPECT_EQ(compare(Rational(1, 1000), 1e-30), std::partial_ordering::greater);
  EXPECT_EQ(compare(Rational(-1, 1000), -1e-30), std::partial_ordering::less);
  EXPECT_EQ(compare(Rational(5), 1e300), std::partial_ordering::less);
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_EQ(Rational::parse("-3/6"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse("0.1"), Rational(1, 10));
  EXPECT_EQ(Rational::parse("-2.25"), Rational(-9, 4));
  EXPECT_EQ(Rational::parse(".5"), Rational(1, 2));
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1."), std::invalid_argument);
  EXPECT_EQ(Rational(239, 3).str(), "239/3");
  EXPECT_EQ(Rational(-4).str(), "-4");
}
