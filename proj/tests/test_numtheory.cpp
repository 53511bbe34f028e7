#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <vector>

#include "beiterlab/errors.hpp"
#include "beiterlab/numtheory.hpp"

using namespace beiterlab;

namespace {

bool trial_division(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<bool> eratosthenes(std::int64_t n) {
  std::vector<bool> sieve(static_cast<std::size_t>(n + 1), true);
  sieve[0] = false;
  if (n >= 1) sieve[1] = false;
  for (std::int64_t i = 2; i * i <= n; ++i)
    if (sieve[static_cast<std::size_t>(i)])
      for (std::int64_t j = i * i; j <= n; j += i) sieve[static_cast<std::size_t>(j)] = false;
  return sieve;
}

}  // namespace

TEST(IsPrime, SmallValues) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(239));
  EXPECT_FALSE(is_prime(105));
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
}

TEST(IsPrime, AgreesWithTrialDivisionBelow100000) {
  for (std::int64_t n = 0; n < 100000; ++n) ASSERT_EQ(is_prime(n), trial_division(n)) << n;
}

TEST(IsPrime, LargeKnownValues) {
  EXPECT_TRUE(is_prime(2305843009213693951LL));   // 2^61 - 1
  EXPECT_TRUE(is_prime(9223372036854775783LL));   // largest prime below 2^63
  EXPECT_FALSE(is_prime(3215031751LL));           // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(is_prime(3825123056546413051LL));  // strong pseudoprime to bases up to 23
  EXPECT_FALSE(is_prime(561));                    // Carmichael
  EXPECT_FALSE(is_prime(1000000007LL * 998244353LL));
  EXPECT_FALSE(is_prime(9223372036854775807LL));  // 7^2 * 73 * ...
}

TEST(IsPrime, RandomSemiprimesAreComposite) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::int64_t a = static_cast<std::int64_t>(rng() % 3000000000ULL) + 3;
    std::int64_t b = static_cast<std::int64_t>(rng() % 3000000000ULL) + 3;
    if (static_cast<__int128>(a) * b > INT64_MAX) continue;
    EXPECT_FALSE(is_prime(a * b)) << a << "*" << b;
  }
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(1, 7), 1);
  EXPECT_EQ(mod_inverse(5, 13), 8);
  EXPECT_EQ(mod_inverse(10, 23), 7);
  EXPECT_EQ(mod_inverse(-1, 7), 6);
  EXPECT_EQ(mod_inverse(15, 7), 1);
  EXPECT_THROW(mod_inverse(14, 7), ZeroResidue);
  EXPECT_THROW(mod_inverse(0, 5), ZeroResidue);
}

TEST(ModInverse, RandomPairs) {
  std::mt19937_64 rng(11);
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 3; p < 20000; p += 2)
    if (trial_division(p)) primes.push_back(p);
  primes.push_back(2305843009213693951LL);
  for (int i = 0; i < 100000; ++i) {
    const std::int64_t p = primes[rng() % primes.size()];
    const std::int64_t x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p - 1)) + 1;
    const std::int64_t y = mod_inverse(x, p);
    ASSERT_GE(y, 1);
    ASSERT_LT(y, p);
    ASSERT_EQ(static_cast<__int128>(x) * y % p, 1) << x << " mod " << p;
  }
}

TEST(InverseTable, Examples) {
  const InverseTable t5(5);
  EXPECT_EQ(t5.values().size(), 5u);
  EXPECT_EQ(t5[0], InverseTable::kNoInverse);
  EXPECT_EQ(t5[1], 1);
  EXPECT_EQ(t5[2], 3);
  EXPECT_EQ(t5[3], 2);
  EXPECT_EQ(t5[4], 4);
  EXPECT_EQ(InverseTable(11)[4], 3);
  const InverseTable t3(3);
  EXPECT_EQ(t3[1], 1);
  EXPECT_EQ(t3[2], 2);
}

TEST(InverseTable, RejectsNonOddPrimes) {
  EXPECT_THROW(InverseTable(4), NotPrime);
  EXPECT_THROW(InverseTable(2), NotPrime);
  EXPECT_THROW(InverseTable(1), NotPrime);
}

TEST(InverseTable, InvolutionPermutationUpTo10000) {
  for (std::int64_t p = 3; p <= 10000; p += 2) {
    if (!trial_division(p)) continue;
    const InverseTable t(p);
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    ASSERT_EQ(t[1], 1);
    ASSERT_EQ(t[p - 1], p - 1);
    for (std::int64_t x = 1; x < p; ++x) {
      const std::int64_t y = t[x];
      ASSERT_GE(y, 1);
      ASSERT_LT(y, p);
      ASSERT_EQ(x * y % p, 1);
      ASSERT_EQ(t[y], x);
      ASSERT_FALSE(seen[static_cast<std::size_t>(y)]);
      seen[static_cast<std::size_t>(y)] = true;
    }
  }
}

TEST(InverseTable, AgreesWithBruteForceSmallPrimes) {
  for (std::int64_t p : {3, 5, 7, 11, 13, 101, 239}) {
    const InverseTable t(p);
    for (std::int64_t x = 1; x < p; ++x) {
      std::int64_t brute = 0;
      for (std::int64_t y = 1; y < p; ++y)
        if (x * y % p == 1) brute = y;
      ASSERT_EQ(t[x], brute);
      ASSERT_EQ(t[x], mod_inverse(x, p));
    }
  }
}

TEST(PrimesIn, Examples) {
  EXPECT_EQ(primes_in({11, 50, 11, 4}), (std::vector<std::int64_t>{37}));
  EXPECT_EQ(primes_in({2, 10}), (std::vector<std::int64_t>{3, 5, 7}));
  EXPECT_EQ(primes_in({10, 20, 3, 2}), (std::vector<std::int64_t>{11, 17}));
  EXPECT_TRUE(primes_in({20, 20}).empty());
}

TEST(PrimesIn, NonCoprimeResidue) {
  // The class 3 (mod 6) holds the single prime 3.
  EXPECT_EQ(primes_in({1, 100, 6, 3}), (std::vector<std::int64_t>{3}));
  EXPECT_TRUE(primes_in({3, 100, 6, 3}).empty());
  EXPECT_EQ(primes_in({0, 100, 10, 5}), (std::vector<std::int64_t>{5}));
  EXPECT_THROW(primes_in({1, 100, 6, 0}), NonCoprimeResidue);
  EXPECT_THROW(primes_in({1, 100, 6, 4}), NonCoprimeResidue);
}

TEST(PrimesIn, MatchesSieveUpTo10Million) {
  const std::int64_t limit = 10'000'000;
  const auto sieve = eratosthenes(limit);
  const auto got = primes_in({1, limit});
  std::size_t i = 0;
  for (std::int64_t n = 2; n <= limit; ++n) {
    if (!sieve[static_cast<std::size_t>(n)]) continue;
    ASSERT_LT(i, got.size());
    ASSERT_EQ(got[i++], n);
  }
  EXPECT_EQ(i, got.size());
  EXPECT_EQ(sieve_primes(limit).size(), got.size());
}

TEST(PrimesIn, RandomProgressionsMatchFilteredSieve) {
  const std::int64_t limit = 2'000'000;
  const auto sieve = eratosthenes(limit);
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 60; ++iter) {
    const auto modulus = static_cast<std::int64_t>(rng() % 500) + 1;
    std::int64_t residue = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(modulus));
    while (std::gcd(residue, modulus) != 1) residue = (residue + 1) % modulus;
    std::int64_t lo = static_cast<std::int64_t>(rng() % limit) + 1;
    std::int64_t hi = static_cast<std::int64_t>(rng() % limit) + 1;
    if (lo > hi) std::swap(lo, hi);
    std::vector<std::int64_t> want;
    for (std::int64_t n = lo + 1; n <= hi; ++n)
      if (sieve[static_cast<std::size_t>(n)] && n % modulus == residue % modulus) want.push_back(n);
    ASSERT_EQ(primes_in({lo, hi, modulus, residue}), want) << lo << " " << hi << " " << modulus << " " << residue;
  }
}

TEST(Factorization, DistinctFactorsAndPhi) {
  EXPECT_EQ(distinct_prime_factors(90), (std::vector<std::int64_t>{2, 3, 5}));
  EXPECT_EQ(distinct_prime_factors(1), std::vector<std::int64_t>{});
  EXPECT_EQ(distinct_prime_factors(2305843009213693951LL), (std::vector<std::int64_t>{2305843009213693951LL}));
  for (std::int64_t n = 1; n <= 2000; ++n) {
    std::int64_t phi = 0;
    for (std::int64_t k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1 ? 1 : 0;
    ASSERT_EQ(euler_phi(n), phi) << n;
  }
}
