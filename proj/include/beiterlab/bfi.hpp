#pragma once

// Primes p = -9 (mod q) for primes q ~ sqrt(X), q = 2 (mod 3). Writing
// p + 9 = q m yields an explicit inverse pair (x, y) near the left vertex of a
// Beiter triangle, i.e. a Beiter residue within O(sqrt p) of p/3.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beiterlab/beiter.hpp"
#include "beiterlab/errors.hpp"
#include "beiterlab/numtheory.hpp"
#include "beiterlab/parallel.hpp"
#include "beiterlab/rational.hpp"

namespace beiterlab {

struct BfiConfig {
  std::int64_t X = 100000;
  Rational c3{2};
  Rational c4{1};
  Rational c5{2};
  Rational c6{1, 10};
  /// Slack in the implied bound M(p) > 2p/3 - c8 sqrt(p).
  Rational c8{2};
};

/// Throws ConfigError unless X >= 1000, c3 > 1, 0 < c4 < c5,
/// 0 < c6 < (c3 - 1)(log c5 - log c4)/2 and c5 sqrt(X) <= X^(3/4).
inline void validate(const BfiConfig& c) {
  if (c.X < 1000) throw ConfigError("X must be at least 1000");
  if (!(c.c3 > Rational(1))) throw ConfigError("c3 must exceed 1");
  if (!(Rational(0) < c.c4 && c.c4 < c.c5)) throw ConfigError("need 0 < c4 < c5");
  const double c6_max =
      (c.c3.to_double() - 1) * (std::log(c.c5.to_double()) - std::log(c.c4.to_double())) / 2;
  if (!(c.c6 > Rational(0)) || compare(c.c6, c6_max) >= 0)
    throw ConfigError("c6 must lie in (0, (c3-1)(log c5 - log c4)/2) = (0, " + std::to_string(c6_max) + ")");
  // c5 sqrt(X) <= X^(3/4)  <=>  c5^4 <= X
  const Rational c5sq = c.c5 * c.c5;
  if (c5sq * c5sq > Rational(c.X)) throw ConfigError("Q = c5 sqrt(X) exceeds X^(3/4)");
}

enum class BfiCase { I, II };

constexpr std::string_view to_string(BfiCase c) { return c == BfiCase::I ? "I" : "II"; }

/// Where the constructed point sits relative to the Beiter triangles.
enum class Membership { none, plus, minus, minus_swapped };

constexpr std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::none: return "none";
    case Membership::plus: return "plus";
    case Membership::minus: return "minus";
    case Membership::minus_swapped: return "minus_swapped";
  }
  return "?";
}

struct BfiHit {
  std::int64_t p = 0, q = 0, m = 0;
  bool m_prime = false;
  BfiCase kase = BfiCase::I;
  std::int64_t a = 0, b = 0;
  std::int64_t x = 0, y = 0;
  Membership membership = Membership::none;

  bool in_triangle() const { return membership != Membership::none; }
  /// The Beiter residue exhibited by the point (x, or y when swapped).
  std::int64_t beta() const { return membership == Membership::minus_swapped ? y : x; }
};

/// Case I (p = 2 mod 3): q = 3a - 1, m = 3b + 1, x = (p+1)/3 + b, y = (2p-1)/3 + a.
/// Case II (p = 1 mod 3): q = 3a - 1, m = 3b - 1, x = (p-1)/3 + a, y = (p-1)/3 + b.
inline BfiHit construct_point(std::int64_t p, std::int64_t q) {
  if (!is_prime(p) || !is_prime(q)) throw BadCongruence("p and q must be prime");
  if (p == q || p % 3 == 0) throw BadCongruence("need p != q and p != 3");
  if (q % 3 != 2) throw BadCongruence("need q = 2 (mod 3)");
  if ((p + 9) % q != 0) throw BadCongruence("need p = -9 (mod q)");
  BfiHit h;
  h.p = p;
  h.q = q;
  h.m = (p + 9) / q;
  h.m_prime = is_prime(h.m);
  h.a = (q + 1) / 3;
  if (p % 3 == 2) {
    h.kase = BfiCase::I;
    h.b = (h.m - 1) / 3;
    h.x = (p + 1) / 3 + h.b;
    h.y = (2 * p - 1) / 3 + h.a;
  } else {
    h.kase = BfiCase::II;
    h.b = (h.m + 1) / 3;
    h.x = (p - 1) / 3 + h.a;
    h.y = (p - 1) / 3 + h.b;
  }
  if (h.b < 1) throw BadCongruence("cofactor m too small for a positive b");
  if (static_cast<__int128>(h.x) * h.y % p != 1) throw std::logic_error("constructed point is not an inverse pair");
  if (h.kase == BfiCase::I) {
    if (in_plus_triangle(p, h.x, h.y)) h.membership = Membership::plus;
  } else if (in_minus_triangle(p, h.x, h.y)) {
    h.membership = Membership::minus;
  } else if (in_minus_triangle(p, h.y, h.x)) {
    h.membership = Membership::minus_swapped;
  }
  return h;
}

struct BfiReport {
  BfiConfig config;
  std::vector<BfiHit> hits;  // ascending (p, q)
  std::int64_t q_count = 0;
  std::int64_t distinct_p_count = 0;
  double density_floor = 0;  // c6 X / log^2 X
  bool pass = false;
  /// Desk-scale outcome of a statement that only holds for X large enough.
  bool asymptotic = true;
  std::int64_t in_triangle_count = 0;
  /// max (beta - p/3)/sqrt(p) over hits inside a triangle.
  double max_gap_ratio = 0;
  /// Every in-triangle hit has p - beta > 2p/3 - c8 sqrt(p).
  bool c8_holds = true;
};

inline BfiReport bfi_scan(const BfiConfig& config, unsigned jobs = 1) {
  validate(config);
  BfiReport rep;
  rep.config = config;
  const std::int64_t X = config.X;
  const double root = std::sqrt(static_cast<double>(X));
  // c4 sqrt(X) < q <= c5 sqrt(X), decided exactly on q^2.
  auto above_c4 = [&](std::int64_t q) { return Rational(q) * Rational(q) > config.c4 * config.c4 * Rational(X); };
  auto within_c5 = [&](std::int64_t q) { return Rational(q) * Rational(q) <= config.c5 * config.c5 * Rational(X); };
  const auto q_lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(config.c4.to_double() * root) - 2);
  const auto q_hi = static_cast<std::int64_t>(config.c5.to_double() * root) + 2;
  std::vector<std::int64_t> qs;
  for (std::int64_t q : primes_in({q_lo, q_hi, 3, 2}))
    if (above_c4(q) && within_c5(q)) qs.push_back(q);
  rep.q_count = static_cast<std::int64_t>(qs.size());

  const std::int64_t p_hi = (config.c3 * Rational(X)).floor();
  auto per_q = parallel_map(qs.size(), jobs, [&](std::size_t i) {
    const std::int64_t q = qs[i];
    std::vector<BfiHit> out;
    for (std::int64_t p : primes_in({X, p_hi, q, detail::mod(-9, q)}))
      if (p % 3 != 0) out.push_back(construct_point(p, q));
    return out;
  });
  for (auto& v : per_q) rep.hits.insert(rep.hits.end(), v.begin(), v.end());
  std::sort(rep.hits.begin(), rep.hits.end(),
            [](const BfiHit& l, const BfiHit& r) { return l.p != r.p ? l.p < r.p : l.q < r.q; });

  const double lx = std::log(static_cast<double>(X));
  rep.density_floor = config.c6.to_double() * static_cast<double>(X) / (lx * lx);
  std::int64_t last = 0;
  for (const BfiHit& h : rep.hits) {
    if (h.p != last) ++rep.distinct_p_count;
    last = h.p;
    if (!h.in_triangle()) continue;
    ++rep.in_triangle_count;
    const double sp = std::sqrt(static_cast<double>(h.p));
    const double gap = (static_cast<double>(h.beta()) - static_cast<double>(h.p) / 3) / sp;
    rep.max_gap_ratio = std::max(rep.max_gap_ratio, gap);
    const double implied = static_cast<double>(h.p - h.beta());
    if (!(implied > 2.0 * static_cast<double>(h.p) / 3 - config.c8.to_double() * sp)) rep.c8_holds = false;
  }
  rep.pass = static_cast<double>(rep.distinct_p_count) >= rep.density_floor;
  return rep;
}

/// For p = 1 (mod 3): every (x, y) in B-x(p) written as x = (p-1)/3 + a,
/// y = (p-1)/3 + b satisfies (3a-1)(3b-1) = 9 (mod p) but not = 9, so
/// |(3a-1)(3b-1) - 9| >= p.
struct SqrtGapEntry {
  std::int64_t p = 0;
  std::int64_t points = 0;
  std::optional<std::int64_t> min_a;
  double min_a_over_sqrt_p = 0;
  bool congruence_ok = true;
};

inline SqrtGapEntry sqrt_gap_entry(const BeiterSets& s) {
  SqrtGapEntry e;
  e.p = s.p;
  const std::int64_t p = s.p;
  const std::int64_t base = (p - 1) / 3;
  for (const BeiterPoint& pt : s.minus) {
    ++e.points;
    const std::int64_t a = pt.beta - base;
    const std::int64_t b = pt.betabar - base;
    const std::int64_t prod = (3 * a - 1) * (3 * b - 1);
    const std::int64_t diff = prod - 9;
    if (detail::mod(diff, p) != 0 || diff == 0 || (diff < 0 ? -diff : diff) < p) e.congruence_ok = false;
    if (!e.min_a || a < *e.min_a) e.min_a = a;
  }
  if (e.min_a) e.min_a_over_sqrt_p = static_cast<double>(*e.min_a) / std::sqrt(static_cast<double>(p));
  return e;
}

/// One entry per prime 11 <= p <= p_max with p = 1 (mod 3).
inline std::vector<SqrtGapEntry> verify_sqrt_gap(std::int64_t p_max, unsigned jobs = 1) {
  if (p_max < 11) throw std::invalid_argument("sqrt gap check needs p_max >= 11");
  const auto ps = primes_in({10, p_max, 3, 1});
  return parallel_map(ps.size(), jobs, [&](std::size_t i) { return sqrt_gap_entry(beiter_sets(ps[i])); });
}

}  // namespace beiterlab
