#pragma once

// Primality, prime enumeration in arithmetic progressions and modular inverses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "beiterlab/errors.hpp"

namespace beiterlab {

namespace detail {

constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

constexpr std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// n odd, n - 1 = d * 2^s
constexpr bool strong_probable_prime(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

/// Non-negative residue of x modulo m > 0.
constexpr std::int64_t mod(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

constexpr std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace detail

/// Deterministic primality test for every n < 2^63.
///
/// The first twelve primes as Miller-Rabin bases are a proven witness set for
/// all n < 3.3 * 10^24.
constexpr bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  auto u = static_cast<std::uint64_t>(n);
  for (std::uint64_t p : kBases) {
    if (u == p) return true;
    if (u % p == 0) return false;
  }
  if (u < 41 * 41) return true;
  std::uint64_t d = u - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases)
    if (!detail::strong_probable_prime(u, a, d, s)) return false;
  return true;
}

inline void require_prime(std::int64_t n) {
  if (!is_prime(n)) throw NotPrime(n);
}

inline void require_odd_prime(std::int64_t n) {
  if (n == 2 || !is_prime(n)) throw NotPrime(n);
}

/// The unique y in [1, p-1] with x*y = 1 (mod p). Throws ZeroResidue if p | x.
///
/// Only requires gcd(x, p) = 1; primality of p is the caller's contract.
constexpr std::int64_t mod_inverse(std::int64_t x, std::int64_t p) {
  std::int64_t a = detail::mod(x, p);
  if (a == 0) throw ZeroResidue(x, p);
  std::int64_t old_r = a, r = p;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("residue is not invertible");
  return detail::mod(old_s, p);
}

/// All modular inverses for an odd prime p, indexed directly by residue.
///
/// Entry 0 holds the sentinel kNoInverse. Built in O(p) with the recurrence
/// inv[i] = -(p / i) * inv[p mod i] (mod p).
class InverseTable {
 public:
  static constexpr std::int64_t kNoInverse = 0;

  explicit InverseTable(std::int64_t p) : p_(p) {
    require_odd_prime(p);
    inv_.assign(static_cast<std::size_t>(p), kNoInverse);
    inv_[1] = 1;
    for (std::int64_t i = 2; i < p; ++i) {
      std::int64_t v = p - (p / i) * inv_[static_cast<std::size_t>(p % i)] % p;
      inv_[static_cast<std::size_t>(i)] = v == p ? 0 : v;
    }
  }

  std::int64_t modulus() const { return p_; }

  /// Inverse of the residue x mod p; kNoInverse for x = 0 (mod p).
  std::int64_t operator[](std::int64_t x) const {
    return inv_[static_cast<std::size_t>(detail::mod(x, p_))];
  }

  std::span<const std::int64_t> values() const { return inv_; }

 private:
  std::int64_t p_;
  std::vector<std::int64_t> inv_;
};

/// Primes in (lo, hi], optionally restricted to residue (mod modulus).
struct PrimeRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
  std::int64_t modulus = 1;
  std::int64_t residue = 0;
};

/// Primes <= limit by the plain sieve of Eratosthenes.
inline std::vector<std::int64_t> sieve_primes(std::int64_t limit) {
  std::vector<std::int64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

/// Ascending list of primes in a PrimeRange, via a segmented sieve.
///
/// A class with gcd(residue, modulus) > 1 holds at most one prime, the residue
/// itself; that case is accepted only when the residue is prime, otherwise
/// NonCoprimeResidue is thrown.
inline std::vector<std::int64_t> primes_in(const PrimeRange& range) {
  if (range.lo < 0 || range.hi < range.lo) throw std::invalid_argument("primes_in: need 0 <= lo <= hi");
  if (range.modulus < 1 || range.residue < 0 || range.residue >= range.modulus)
    throw std::invalid_argument("primes_in: residue must lie in [0, modulus)");

  std::vector<std::int64_t> out;
  if (range.modulus > 1 && std::gcd(range.residue, range.modulus) > 1) {
    if (!is_prime(range.residue))
      throw NonCoprimeResidue("residue " + std::to_string(range.residue) + " shares a factor with modulus " +
                              std::to_string(range.modulus));
    if (range.lo < range.residue && range.residue <= range.hi) out.push_back(range.residue);
    return out;
  }

  const std::int64_t first = std::max<std::int64_t>(range.lo + 1, 2);
  if (first > range.hi) return out;
  const std::vector<std::int64_t> base = sieve_primes(detail::isqrt(range.hi));
  constexpr std::int64_t kSegment = std::int64_t{1} << 18;
  std::vector<char> composite;
  for (std::int64_t seg_lo = first; seg_lo <= range.hi; seg_lo += kSegment) {
    const std::int64_t seg_hi = std::min(range.hi, seg_lo + kSegment - 1);
    composite.assign(static_cast<std::size_t>(seg_hi - seg_lo + 1), 0);
    for (std::int64_t p : base) {
      if (p * p > seg_hi) break;
      std::int64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
      for (std::int64_t j = start; j <= seg_hi; j += p) composite[static_cast<std::size_t>(j - seg_lo)] = 1;
    }
    std::int64_t v = seg_lo;
    if (range.modulus > 1) v += detail::mod(range.residue - seg_lo, range.modulus);
    const std::int64_t step = range.modulus;
    for (; v <= seg_hi; v += step)
      if (!composite[static_cast<std::size_t>(v - seg_lo)]) out.push_back(v);
  }
  return out;
}

/// Distinct prime factors of n >= 1 in ascending order (trial division).
inline std::vector<std::int64_t> distinct_prime_factors(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("distinct_prime_factors: n must be positive");
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (std::int64_t p : distinct_prime_factors(n)) phi = phi / p * (p - 1);
  return phi;
}

}  // namespace beiterlab
