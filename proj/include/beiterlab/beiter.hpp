#pragma once

// Beiter sets B-(p), B+(p): residues beta whose inverse lands in one of two
// lattice triangles, each giving a ternary coefficient of size p - beta.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "beiterlab/cyclotomic.hpp"
#include "beiterlab/errors.hpp"
#include "beiterlab/numtheory.hpp"
#include "beiterlab/parallel.hpp"
#include "beiterlab/rational.hpp"

namespace beiterlab {

enum class BeiterSide { minus, plus };

constexpr std::string_view to_string(BeiterSide s) { return s == BeiterSide::minus ? "minus" : "plus"; }

/// (x, y) in the closed lattice triangle of B-x(p):
/// 1 <= x <= (p-3)/2, p <= x + 2y + 1, x > y, 1 <= y <= p-1.
constexpr bool in_minus_triangle(std::int64_t p, std::int64_t x, std::int64_t y) {
  return x >= 1 && 2 * x <= p - 3 && y >= 1 && y <= p - 1 && p <= x + 2 * y + 1 && x > y;
}

/// (x, y) in the lattice triangle of B+x(p):
/// 1 <= x <= (p-3)/2, x + y >= p, y <= 2x, 1 <= y <= p-1.
constexpr bool in_plus_triangle(std::int64_t p, std::int64_t x, std::int64_t y) {
  return x >= 1 && 2 * x <= p - 3 && y >= 1 && y <= p - 1 && x + y >= p && y <= 2 * x;
}

struct BeiterPoint {
  std::int64_t beta = 0;
  std::int64_t betabar = 0;
  BeiterSide side = BeiterSide::minus;

  friend bool operator==(const BeiterPoint&, const BeiterPoint&) = default;
};

struct BeiterSets {
  std::int64_t p = 0;
  std::vector<BeiterPoint> minus;  // ascending beta
  std::vector<BeiterPoint> plus;   // ascending beta

  std::size_t size() const { return minus.size() + plus.size(); }
  bool empty() const { return minus.empty() && plus.empty(); }

  /// Both sides merged by ascending beta.
  std::vector<BeiterPoint> points() const {
    std::vector<BeiterPoint> all;
    all.reserve(size());
    std::merge(minus.begin(), minus.end(), plus.begin(), plus.end(), std::back_inserter(all),
               [](const BeiterPoint& a, const BeiterPoint& b) { return a.beta < b.beta; });
    return all;
  }
};

inline BeiterSets beiter_sets(const InverseTable& inv) {
  BeiterSets s;
  s.p = inv.modulus();
  const std::int64_t p = s.p;
  for (std::int64_t beta = 1; 2 * beta <= p - 3; ++beta) {
    const std::int64_t bb = inv[beta];
    if (in_minus_triangle(p, beta, bb)) s.minus.push_back({beta, bb, BeiterSide::minus});
    if (in_plus_triangle(p, beta, bb)) s.plus.push_back({beta, bb, BeiterSide::plus});
  }
  return s;
}

inline BeiterSets beiter_sets(std::int64_t p) { return beiter_sets(InverseTable(p)); }

inline double p34_log(std::int64_t p) {
  const double x = static_cast<double>(p);
  return std::pow(x, 0.75) * std::log(x);
}

/// Set sizes against p/48, p/24, p/16 within 12, 12, 24 * p^(3/4) log p.
struct CardinalityReport {
  std::int64_t p = 0;
  std::int64_t count_minus = 0, count_plus = 0, count_union = 0;
  double deviation_minus = 0, deviation_plus = 0, deviation_union = 0;
  double bound_minus = 0, bound_plus = 0, bound_union = 0;
  bool ok_minus = false, ok_plus = false, ok_union = false;

  bool all_ok() const { return ok_minus && ok_plus && ok_union; }
};

/// Bounds must clear the deviation by more than this margin.
inline constexpr double kStrictMargin = 1e-6;

inline CardinalityReport cardinality_check(const BeiterSets& s) {
  CardinalityReport r;
  r.p = s.p;
  r.count_minus = static_cast<std::int64_t>(s.minus.size());
  r.count_plus = static_cast<std::int64_t>(s.plus.size());
  r.count_union = r.count_minus + r.count_plus;
  auto dev = [&](std::int64_t count, std::int64_t den) {
    Rational d = Rational(count) - Rational(s.p, den);
    return std::abs(d.to_double());
  };
  const double base = p34_log(s.p);
  r.deviation_minus = dev(r.count_minus, 48);
  r.deviation_plus = dev(r.count_plus, 24);
  r.deviation_union = dev(r.count_union, 16);
  r.bound_minus = 12 * base;
  r.bound_plus = 12 * base;
  r.bound_union = 24 * base;
  r.ok_minus = r.bound_minus - r.deviation_minus > kStrictMargin;
  r.ok_plus = r.bound_plus - r.deviation_plus > kStrictMargin;
  r.ok_union = r.bound_union - r.deviation_union > kStrictMargin;
  return r;
}

inline CardinalityReport cardinality_check(std::int64_t p) { return cardinality_check(beiter_sets(p)); }

/// Extremes of beta over B-, B+ and their union. A statistic over an empty
/// set is p/3 for a min and p/2 for a max; the union statistics fall back only
/// when both sides are empty.
struct CaptureStats {
  std::int64_t p = 0;
  Rational m_minus, m_plus, m_pm;
  Rational M_minus, M_plus, M_pm;
};

inline CaptureStats capture_stats(const BeiterSets& s) {
  CaptureStats c;
  c.p = s.p;
  const Rational third(s.p, 3), half(s.p, 2);
  auto lo = [&](const std::vector<BeiterPoint>& v) { return v.empty() ? third : Rational(v.front().beta); };
  auto hi = [&](const std::vector<BeiterPoint>& v) { return v.empty() ? half : Rational(v.back().beta); };
  c.m_minus = lo(s.minus);
  c.m_plus = lo(s.plus);
  c.M_minus = hi(s.minus);
  c.M_plus = hi(s.plus);
  if (s.minus.empty() || s.plus.empty()) {
    const auto& only = s.minus.empty() ? s.plus : s.minus;
    c.m_pm = lo(only);
    c.M_pm = hi(only);
  } else {
    c.m_pm = std::min(c.m_minus, c.m_plus);
    c.M_pm = std::max(c.M_minus, c.M_plus);
  }
  return c;
}

inline CaptureStats capture_stats(std::int64_t p) { return capture_stats(beiter_sets(p)); }

enum class CheckKind { hard, exact, soft };

constexpr std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::hard: return "hard";
    case CheckKind::exact: return "exact";
    case CheckKind::soft: return "soft";
  }
  return "?";
}

struct NamedCheck {
  std::string name;
  CheckKind kind = CheckKind::hard;
  bool ok = false;
};

/// The capture-statistic inequalities evaluated for one prime.
///
/// hard: the proved two-sided bounds on m-, m+, m+-, M+, M-.
/// exact: M+ or M- (by p mod 3) and M+- equal (p-3)/2; only for p >= 11.
/// soft: the numerically observed bounds with sqrt(p) and log p error terms.
struct CaptureBoundsReport {
  std::int64_t p = 0;
  CaptureStats stats;
  std::vector<NamedCheck> checks;

  bool passes(CheckKind kind) const {
    return std::all_of(checks.begin(), checks.end(), [&](const NamedCheck& c) { return c.kind != kind || c.ok; });
  }
  bool hard_ok() const { return passes(CheckKind::hard) && passes(CheckKind::exact); }
};

inline CaptureBoundsReport verify_capture_bounds(const BeiterSets& s) {
  CaptureBoundsReport rep;
  rep.p = s.p;
  rep.stats = capture_stats(s);
  const auto& st = rep.stats;
  const std::int64_t p = s.p;
  const double x = static_cast<double>(p);
  const double lg = std::log(x);
  const double p34 = p34_log(p);
  const double root = std::sqrt(x);
  const Rational third(p, 3), half(p, 2);
  auto le = [](const Rational& a, double b) { return compare(a, b) <= 0; };
  auto ge = [](const Rational& a, double b) { return compare(a, b) >= 0; };
  auto add = [&](std::string name, CheckKind kind, bool ok) { rep.checks.push_back({std::move(name), kind, ok}); };

  add("m_minus_lower", CheckKind::hard, third <= st.m_minus);
  add("m_minus_upper", CheckKind::hard, le(st.m_minus, x / 3 + 4.25 * p34));
  add("m_plus_lower", CheckKind::hard, third <= st.m_plus);
  add("m_plus_upper", CheckKind::hard, le(st.m_plus, x / 3 + 3 * p34));
  add("m_pm_lower", CheckKind::hard, third <= st.m_pm);
  add("m_pm_upper", CheckKind::hard, le(st.m_pm, x / 3 + 3 * p34));
  add("M_plus_lower", CheckKind::hard, ge(st.M_plus, x / 2 - 3 * root * lg * lg));
  add("M_plus_upper", CheckKind::hard, st.M_plus <= half);
  add("M_minus_lower", CheckKind::hard, ge(st.M_minus, x / 2 - 6 * root * lg * lg));
  add("M_minus_upper", CheckKind::hard, st.M_minus <= half);

  if (p >= 11) {
    const Rational top((p - 3) / 2);
    add("M_mod3_exact", CheckKind::exact, (p % 3 == 1 ? st.M_plus : st.M_minus) == top);
    add("M_pm_exact", CheckKind::exact, st.M_pm == top);
  }

  add("m_minus_sqrt", CheckKind::soft, le(st.m_minus, x / 3 + 6 * root));
  add("m_plus_sqrt", CheckKind::soft, le(st.m_plus, x / 3 + 4 * root));
  add("M_minus_log", CheckKind::soft, ge(st.M_minus, x / 2 - 4 * lg));
  add("M_plus_log", CheckKind::soft, ge(st.M_plus, x / 2 - 2 * lg));
  return rep;
}

inline CaptureBoundsReport verify_capture_bounds(std::int64_t p) { return verify_capture_bounds(beiter_sets(p)); }

/// p - min B(p), the coefficient size guaranteed by the smallest Beiter residue.
/// Throws EmptyBeiterSet when B(p) is empty (only p <= 7).
inline std::int64_t beiter_lower_bound(const BeiterSets& s) {
  if (s.empty()) throw EmptyBeiterSet(s.p);
  const std::int64_t min_beta = s.points().front().beta;
  const std::int64_t bound = s.p - min_beta;
  if (2 * bound <= s.p + 1) throw std::logic_error("Beiter lower bound not above (p+1)/2");
  return bound;
}

inline std::int64_t beiter_lower_bound(std::int64_t p) { return beiter_lower_bound(beiter_sets(p)); }

/// A ternary coefficient exceeding (p+1)/2.
struct Certificate {
  std::int64_t p = 0, q = 0, r = 0;
  std::int64_t n = 0;      // coefficient index in Phi_pqr
  std::int64_t value = 0;  // a_pqr(n)
  std::int64_t beta = 0;   // q mod p
  BeiterSide side = BeiterSide::minus;
};

/// Search exhausted without a certificate. This is not evidence that none
/// exists: the thresholds on q are not known here.
struct NotFoundReport {
  std::int64_t p = 0;
  std::int64_t q_limit = 0, r_limit = 0;
  std::vector<std::int64_t> betas_tried;
  std::int64_t triples_examined = 0;
};

using CounterexampleResult = std::variant<Certificate, NotFoundReport>;

/// Looks for |a_pqr(n)| >= p - beta with q = beta (mod p), trying beta in B(p)
/// in increasing order, then primes q <= q_limit, then primes q < r <= r_limit.
/// The lexicographically smallest (q, r, n) of the first productive beta wins,
/// independent of `jobs`.
inline CounterexampleResult find_counterexample(std::int64_t p, std::int64_t q_limit, std::int64_t r_limit,
                                                unsigned jobs = 1) {
  require_odd_prime(p);
  NotFoundReport nf{p, q_limit, r_limit, {}, 0};
  for (const BeiterPoint& pt : beiter_sets(p).points()) {
    nf.betas_tried.push_back(pt.beta);
    const std::int64_t target = p - pt.beta;
    struct Item {
      std::int64_t q, r;
    };
    std::vector<Item> items;
    for (std::int64_t q : primes_in({p, std::max(p, q_limit), p, pt.beta}))
      for (std::int64_t r : primes_in({q, std::max(q, r_limit)})) items.push_back({q, r});
    auto hit = parallel_find_first(items.size(), jobs, [&](std::size_t i) -> std::optional<Certificate> {
      const auto [q, r] = items[i];
      auto c = first_coefficient_at_least(p * q * r, target);
      if (!c) return std::nullopt;
      return Certificate{p, q, r, c->first, c->second, pt.beta, pt.side};
    });
    if (hit) return hit->second;
    nf.triples_examined += static_cast<std::int64_t>(items.size());
  }
  return nf;
}

/// Re-derives the certificate's coefficient with the dense expansion and
/// checks every stated property.
inline bool verify_certificate(const Certificate& c) {
  if (!is_prime(c.p) || !is_prime(c.q) || !is_prime(c.r)) return false;
  if (!(c.p < c.q && c.q < c.r) || c.q % c.p != c.beta) return false;
  if (2 * std::abs(c.value) <= c.p + 1) return false;
  const auto prefix = cyclotomic_prefix(c.p * c.q * c.r, c.n + 1);
  return prefix[static_cast<std::size_t>(c.n)] == c.value;
}

struct DeltaRow {
  std::int64_t q = 0;
  bool exceeds = false;
  std::int64_t witness_r = 0;  // 0 when no r <= r_limit exceeds
};

/// Share of primes q in (p, q_max] with some A(pqr) > (p+1)/2 among r <= r_limit,
/// next to the proven lower bound #B(p)/(p-1) for its lim inf.
struct DeltaEstimate {
  std::int64_t p = 0;
  std::int64_t q_max = 0, r_limit = 0;
  std::vector<DeltaRow> rows;
  std::int64_t exceeding = 0;
  Rational empirical;
  Rational rigorous;
};

inline DeltaEstimate delta_lower_estimate(std::int64_t p, std::int64_t q_max, std::int64_t r_limit,
                                          unsigned jobs = 1) {
  require_odd_prime(p);
  DeltaEstimate est;
  est.p = p;
  est.q_max = q_max;
  est.r_limit = r_limit;
  const auto sets = beiter_sets(p);
  est.rigorous = Rational(static_cast<std::int64_t>(sets.size()), p - 1);
  const auto qs = primes_in({p, std::max(p, q_max)});
  if (qs.empty()) throw std::invalid_argument("no primes q in (p, q_max]");
  const std::int64_t threshold = (p + 1) / 2 + 1;
  est.rows = parallel_map(qs.size(), jobs, [&](std::size_t i) {
    DeltaRow row{qs[i]};
    for (std::int64_t r : primes_in({qs[i], std::max(qs[i], r_limit)})) {
      if (first_coefficient_at_least(p * qs[i] * r, threshold)) {
        row.exceeds = true;
        row.witness_r = r;
        break;
      }
    }
    return row;
  });
  for (const auto& row : est.rows) est.exceeding += row.exceeds ? 1 : 0;
  est.empirical = Rational(est.exceeding, static_cast<std::int64_t>(qs.size()));
  return est;
}

}  // namespace beiterlab
