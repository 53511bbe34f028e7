#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "beiterlab/bfi.hpp"
#include "beiterlab/errors.hpp"

using namespace beiterlab;

TEST(ConstructPoint, CaseI) {
  const auto h = construct_point(11, 5);
  EXPECT_EQ(h.kase, BfiCase::I);
  EXPECT_EQ(h.m, 4);
  EXPECT_FALSE(h.m_prime);
  EXPECT_EQ(h.a, 2);
  EXPECT_EQ(h.b, 1);
  EXPECT_EQ(h.x, 5);
  EXPECT_EQ(h.y, 9);
  EXPECT_EQ(h.x * h.y % 11, 1);
}

TEST(ConstructPoint, CaseII) {
  const auto h = construct_point(31, 5);
  EXPECT_EQ(h.kase, BfiCase::II);
  EXPECT_EQ(h.m, 8);
  EXPECT_EQ(h.a, 2);
  EXPECT_EQ(h.b, 3);
  EXPECT_EQ(h.x, 12);
  EXPECT_EQ(h.y, 13);
  EXPECT_EQ(h.membership, Membership::minus_swapped);
  EXPECT_EQ(h.beta(), 13);
  // (13, 12) is in B-(31): 13 > 12 and 31 <= 13 + 24 + 1
  EXPECT_TRUE(in_minus_triangle(31, 13, 12));
}

TEST(ConstructPoint, RejectsBadInput) {
  EXPECT_THROW(construct_point(13, 5), BadCongruence);   // 22 not divisible by 5
  EXPECT_THROW(construct_point(11, 7), BadCongruence);   // 7 = 1 (mod 3)
  EXPECT_THROW(construct_point(21, 5), BadCongruence);   // 21 composite
  EXPECT_THROW(construct_point(3, 2), BadCongruence);    // p = 3
  EXPECT_THROW(construct_point(5, 5), BadCongruence);
  EXPECT_THROW(construct_point(2, 11), BadCongruence);   // m = 1 gives b = 0
}

TEST(ConstructPoint, AllSmallPairsAreInversePairs) {
  for (std::int64_t q : primes_in({2, 200, 3, 2}))
    for (std::int64_t p : primes_in({3, 20000, q, detail::mod(-9, q)})) {
      if (p % 3 == 0 || p == q || p + 9 < 4 * q) continue;
      const auto h = construct_point(p, q);
      ASSERT_EQ(h.x * h.y % p, 1) << p << " " << q;
      ASSERT_EQ(h.q, 3 * h.a - 1);
      ASSERT_EQ(h.m, h.kase == BfiCase::I ? 3 * h.b + 1 : 3 * h.b - 1);
      ASSERT_EQ(h.kase == BfiCase::I, p % 3 == 2);
      const auto s = beiter_sets(p);
      if (h.membership == Membership::plus) ASSERT_TRUE(in_plus_triangle(p, h.x, h.y));
      if (h.membership == Membership::minus) ASSERT_TRUE(in_minus_triangle(p, h.x, h.y));
      if (h.in_triangle()) {
        bool listed = false;
        for (const auto& pt : s.points()) listed = listed || pt.beta == h.beta();
        ASSERT_TRUE(listed);
      }
    }
}

TEST(BfiScan, CanonicalConfigurationPasses) {
  const auto rep = bfi_scan(BfiConfig{});
  EXPECT_TRUE(rep.pass);
  EXPECT_TRUE(rep.asymptotic);
  EXPECT_NEAR(rep.density_floor, 0.1 * 100000 / std::pow(std::log(100000.0), 2), 1e-9);
  EXPECT_GE(static_cast<double>(rep.distinct_p_count), rep.density_floor);
  EXPECT_GT(rep.in_triangle_count, 0);
  std::set<std::int64_t> ps;
  for (std::size_t i = 0; i < rep.hits.size(); ++i) {
    const auto& h = rep.hits[i];
    ASSERT_EQ(static_cast<__int128>(h.x) * h.y % h.p, 1);
    ASSERT_EQ((h.p + 9) % h.q, 0);
    ASSERT_GT(h.p, 100000);
    ASSERT_LE(h.p, 200000);
    ASSERT_GT(h.q * h.q, 100000);
    ASSERT_LE(h.q * h.q, 400000);
    ASSERT_EQ(h.kase == BfiCase::I, h.p % 3 == 2);
    if (i > 0) ASSERT_TRUE(rep.hits[i - 1].p < h.p || (rep.hits[i - 1].p == h.p && rep.hits[i - 1].q < h.q));
    ps.insert(h.p);
  }
  EXPECT_EQ(static_cast<std::int64_t>(ps.size()), rep.distinct_p_count);
}

TEST(BfiScan, QCountMatchesDirectEnumeration) {
  BfiConfig c;
  c.X = 10000;
  c.c5 = Rational(10);
  const auto rep = bfi_scan(c);
  std::int64_t want = 0;
  for (std::int64_t q = 2; q <= 1000; ++q)
    if (is_prime(q) && q % 3 == 2 && q * q > 10000 && q * q <= 1000000) ++want;
  EXPECT_EQ(rep.q_count, want);
}

TEST(BfiScan, JobCountDoesNotChangeHits) {
  BfiConfig c;
  c.X = 20000;
  const auto a = bfi_scan(c, 1), b = bfi_scan(c, 4);
  ASSERT_EQ(a.hits.size(), b.hits.size());
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    EXPECT_EQ(a.hits[i].p, b.hits[i].p);
    EXPECT_EQ(a.hits[i].q, b.hits[i].q);
  }
}

TEST(BfiConfig, Validation) {
  EXPECT_NO_THROW(validate(BfiConfig{}));
  BfiConfig c;
  c.c6 = Rational(1, 2);  // bound is log(2)/2 = 0.3466
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.c6 = Rational(0);
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.c6 = Rational(34, 100);
  EXPECT_NO_THROW(validate(c));
  c = {};
  c.X = 999;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.c3 = Rational(1);
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.c4 = Rational(2);
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.X = 1000;
  c.c5 = Rational(6);  // 6^4 = 1296 > 1000
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_THROW(bfi_scan(c), ConfigError);
}

TEST(SqrtGap, P31) {
  const auto e = sqrt_gap_entry(beiter_sets(31));
  ASSERT_TRUE(e.min_a.has_value());
  // smallest beta in B-(31), minus (p-1)/3
  std::int64_t min_beta = 31;
  for (std::int64_t b = 1; 2 * b <= 28; ++b) {
    std::int64_t bb = 1;
    while (b * bb % 31 != 1) ++bb;
    if (31 <= b + 2 * bb + 1 && b > bb) min_beta = std::min(min_beta, b);
  }
  EXPECT_EQ(*e.min_a, min_beta - 10);
  EXPECT_EQ(*e.min_a, 3);
  EXPECT_TRUE(e.congruence_ok);
}

TEST(SqrtGap, HoldsUpTo100000) {
  const auto entries = verify_sqrt_gap(100000);
  EXPECT_EQ(entries.size(), primes_in({10, 100000, 3, 1}).size());
  for (const auto& e : entries) {
    ASSERT_TRUE(e.congruence_ok) << e.p;
    ASSERT_EQ(e.p % 3, 1);
    // every beta in B-(p) exceeds p/3
    if (e.min_a) ASSERT_GE(*e.min_a, 1) << e.p;
  }
  EXPECT_THROW(verify_sqrt_gap(7), std::invalid_argument);
}
