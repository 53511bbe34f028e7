#pragma once

// Exact coefficients and heights of cyclotomic polynomials.
//
// Two independent routes compute the same integers:
//  * cyclotomic_coeffs / cyclotomic_prefix expand
//      Phi_N(x) = prod_{d | N} (1 - x^d)^{mu(N/d)}
//    as a truncated power series, one dense pass per divisor.
//  * CoefficientStream uses Phi_N(x) = Phi_{N/r}(x^r) / Phi_{N/r}(x) for the
//    largest prime r | N. The numerator is sparse and the division stages
//    only need a ring buffer of d values each, so coefficients are produced
//    one at a time in O(N/r) memory.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "beiterlab/errors.hpp"
#include "beiterlab/numtheory.hpp"
#include "beiterlab/parallel.hpp"

namespace beiterlab {

struct CyclotomicOptions {
  /// Kernels with more than three odd prime factors are refused unless set.
  bool allow_many_primes = false;
};

/// Product of the distinct odd primes dividing n (1 if there are none).
inline std::int64_t odd_squarefree_kernel(std::int64_t n) {
  std::int64_t k = 1;
  for (std::int64_t p : distinct_prime_factors(n))
    if (p != 2) k *= p;
  return k;
}

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("cyclotomic coefficient overflow");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("cyclotomic coefficient overflow");
  return r;
}

inline std::vector<std::int64_t> odd_primes_of(std::int64_t n) {
  auto f = distinct_prime_factors(n);
  std::erase(f, 2);
  return f;
}

inline void require_supported(const std::vector<std::int64_t>& odd_primes, const CyclotomicOptions& opts) {
  if (odd_primes.size() > 3 && !opts.allow_many_primes)
    throw std::invalid_argument("kernel has " + std::to_string(odd_primes.size()) +
                                " odd prime factors; set allow_many_primes to proceed");
}

struct Divisor {
  std::int64_t d;
  int mobius;  // mu(N / d)
};

// Divisors of the squarefree product of `primes` with mu(N/d), ascending in d.
inline std::vector<Divisor> divisors_with_mobius(const std::vector<std::int64_t>& primes) {
  const std::size_t k = primes.size();
  std::vector<Divisor> out;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::int64_t d = 1;
    int missing = static_cast<int>(k);
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) {
        d *= primes[i];
        --missing;
      }
    out.push_back({d, missing % 2 == 0 ? 1 : -1});
  }
  std::sort(out.begin(), out.end(), [](const Divisor& a, const Divisor& b) { return a.d < b.d; });
  return out;
}

// First `terms` coefficients of Phi_N for squarefree N = prod(primes) > 1.
inline std::vector<std::int64_t> dense_kernel_prefix(const std::vector<std::int64_t>& primes,
                                                     std::int64_t terms) {
  std::vector<std::int64_t> a(static_cast<std::size_t>(std::max<std::int64_t>(terms, 0)), 0);
  if (a.empty()) return a;
  a[0] = 1;
  const auto t = static_cast<std::int64_t>(a.size());
  for (const Divisor& div : divisors_with_mobius(primes)) {
    const std::int64_t d = div.d;
    if (d >= t) continue;
    if (div.mobius == 1) {
      // times (1 - x^d), in place from the top
      for (std::int64_t m = t - 1; m >= d; --m) a[m] = checked_sub(a[m], a[m - d]);
    } else {
      // divided by (1 - x^d): g_m = f_m + g_{m-d}
      for (std::int64_t m = d; m < t; ++m) a[m] = checked_add(a[m], a[m - d]);
    }
  }
  return a;
}

}  // namespace detail

/// Coefficients a_n(0..degree) of Phi_n.
struct CoefficientSequence {
  std::int64_t n = 0;
  std::int64_t kernel = 1;
  std::int64_t degree = 0;
  std::vector<std::int64_t> coeffs;

  std::int64_t operator[](std::int64_t k) const {
    return k < 0 || k > degree ? 0 : coeffs[static_cast<std::size_t>(k)];
  }
};

/// First `count` coefficients of Phi_n (zero past the degree), by the dense
/// Moebius expansion of the kernel.
///
/// General n reduces to its kernel through Phi_n(x) = Phi_rad(n)(x^(n/rad(n)))
/// and Phi_2m(x) = Phi_m(-x) for odd m > 1.
inline std::vector<std::int64_t> cyclotomic_prefix(std::int64_t n, std::int64_t count,
                                                   const CyclotomicOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("cyclotomic polynomial needs n > 1");
  if (count < 0) throw std::invalid_argument("negative coefficient count");
  const auto odd = detail::odd_primes_of(n);
  detail::require_supported(odd, opts);
  const bool even = n % 2 == 0;
  std::int64_t rad = even ? 2 : 1;
  for (std::int64_t p : odd) rad *= p;
  const std::int64_t spread = n / rad;

  std::vector<std::int64_t> out(static_cast<std::size_t>(count), 0);
  if (count == 0) return out;
  const std::int64_t kernel_terms = (count - 1) / spread + 1;
  std::vector<std::int64_t> base;
  if (odd.empty()) {
    base = {1, 1};  // Phi_2
    base.resize(static_cast<std::size_t>(std::max<std::int64_t>(kernel_terms, 2)), 0);
  } else {
    base = detail::dense_kernel_prefix(odd, kernel_terms);
    if (even)
      for (std::size_t k = 1; k < base.size(); k += 2) base[k] = -base[k];
  }
  for (std::int64_t k = 0; k < kernel_terms; ++k) out[static_cast<std::size_t>(k * spread)] = base[static_cast<std::size_t>(k)];
  return out;
}

/// All coefficients of Phi_n, exact; OverflowError on any 64-bit overflow.
inline CoefficientSequence cyclotomic_coeffs(std::int64_t n, const CyclotomicOptions& opts = {}) {
  CoefficientSequence seq;
  seq.n = n;
  seq.kernel = odd_squarefree_kernel(std::max<std::int64_t>(n, 1));
  seq.degree = n > 1 ? euler_phi(n) : 0;
  seq.coeffs = cyclotomic_prefix(n, seq.degree + 1, opts);
  return seq;
}

/// Coefficients a_N(0), a_N(1), ..., a_N(last) of Phi_N for an odd squarefree
/// kernel N > 1, produced one by one.
class CoefficientStream {
 public:
  CoefficientStream(std::int64_t kernel, std::int64_t last_index, const CyclotomicOptions& opts = {})
      : CoefficientStream(checked_primes(kernel, opts), last_index) {}

  CoefficientStream(std::vector<std::int64_t> primes, std::int64_t last_index) : last_(last_index) {
    std::sort(primes.begin(), primes.end());
    const std::int64_t r = primes.back();
    primes.pop_back();
    std::int64_t inner = 1;
    for (std::int64_t p : primes) inner *= p;

    // Numerator Phi_inner(x^r), with Phi_1(x) taken as 1 - x.
    std::map<std::int64_t, std::int64_t> num;
    if (primes.empty()) {
      num[0] = 1;
      if (r <= last_) num[r] = -1;
    } else {
      CoefficientStream base(primes, euler_phi(inner));
      for (std::int64_t j = 0; !base.done(); ++j) {
        std::int64_t c = base.next();
        if (c != 0 && j <= last_ / r) num[j * r] = c;
      }
    }
    // 1 / Phi_inner(x) = prod_{d | inner} (1 - x^d)^(-mu(inner/d)).
    for (const auto& div : detail::divisors_with_mobius(primes)) {
      if (div.mobius == -1) {
        std::map<std::int64_t, std::int64_t> next = num;
        for (auto [e, c] : num)
          if (e + div.d <= last_) next[e + div.d] = detail::checked_sub(next[e + div.d], c);
        num.clear();
        for (auto [e, c] : next)
          if (c != 0) num.emplace(e, c);
      } else if (div.d == 1) {
        unit_stage_ = true;
      } else {
        stages_.push_back(Stage{div.d, 0, std::vector<std::int64_t>(static_cast<std::size_t>(div.d), 0)});
      }
    }
    terms_.assign(num.begin(), num.end());
  }

  bool done() const { return index_ > last_; }
  std::int64_t index() const { return index_; }
  std::int64_t last_index() const { return last_; }

  std::int64_t next() {
    std::int64_t v = 0;
    if (cursor_ < terms_.size() && terms_[cursor_].first == index_) v = terms_[cursor_++].second;
    ++index_;
    return step(v);
  }

  /// Calls f(k, a_N(k)) for every remaining index while f returns true.
  /// Returns false if f stopped the scan.
  template <class F>
  bool for_each(F&& f) {
    while (index_ <= last_) {
      const std::int64_t stop =
          cursor_ < terms_.size() ? std::min(terms_[cursor_].first, last_ + 1) : last_ + 1;
      if (stages_.size() == 1 && unit_stage_) {
        // Fast path shared by all ternary kernels.
        Stage& s = stages_.front();
        auto* ring = s.ring.data();
        std::size_t pos = s.pos;
        const auto d = static_cast<std::size_t>(s.d);
        std::int64_t acc = acc_;
        for (; index_ < stop; ++index_) {
          acc = detail::checked_add(acc, ring[pos]);
          if (++pos == d) pos = 0;
          if (!f(index_, acc)) {
            ++index_;
            s.pos = pos;
            acc_ = acc;
            return false;
          }
        }
        s.pos = pos;
        acc_ = acc;
      } else {
        for (; index_ < stop;) {
          std::int64_t k = index_++;
          if (!f(k, step(0))) return false;
        }
      }
      if (index_ > last_) break;
      std::int64_t k = index_;
      if (!f(k, next())) return false;
    }
    return true;
  }

 private:
  struct Stage {
    std::int64_t d;
    std::size_t pos;
    std::vector<std::int64_t> ring;
  };

  static std::vector<std::int64_t> checked_primes(std::int64_t kernel, const CyclotomicOptions& opts) {
    if (kernel < 3 || kernel % 2 == 0) throw std::invalid_argument("stream needs an odd kernel > 1");
    auto primes = distinct_prime_factors(kernel);
    std::int64_t prod = 1;
    for (std::int64_t p : primes) prod *= p;
    if (prod != kernel) throw std::invalid_argument("stream needs a squarefree kernel");
    detail::require_supported(primes, opts);
    return primes;
  }

  std::int64_t step(std::int64_t v) {
    for (Stage& s : stages_) {
      v = detail::checked_add(v, s.ring[s.pos]);
      s.ring[s.pos] = v;
      if (++s.pos == static_cast<std::size_t>(s.d)) s.pos = 0;
    }
    if (unit_stage_) {
      acc_ = detail::checked_add(acc_, v);
      v = acc_;
    }
    return v;
  }

  std::int64_t last_;
  std::int64_t index_ = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> terms_;
  std::size_t cursor_ = 0;
  std::vector<Stage> stages_;
  bool unit_stage_ = false;
  std::int64_t acc_ = 0;
};

/// Height A(n) = max |a_n(k)| together with where it is first attained.
struct HeightRecord {
  std::int64_t n = 0;
  std::int64_t kernel = 1;
  std::int64_t height = 1;
  /// Smallest k with |a_kernel(k)| = height, indexed on Phi_kernel.
  std::int64_t argmax = 0;
};

/// Height of Phi_n, computed on the odd squarefree kernel from the first half
/// of its (palindromic) coefficient sequence.
inline HeightRecord height(std::int64_t n, const CyclotomicOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("height needs n > 1");
  HeightRecord rec;
  rec.n = n;
  rec.kernel = odd_squarefree_kernel(n);
  if (rec.kernel == 1) return rec;
  CoefficientStream stream(rec.kernel, euler_phi(rec.kernel) / 2, opts);
  rec.height = 0;
  stream.for_each([&](std::int64_t k, std::int64_t c) {
    std::int64_t a = c < 0 ? -c : c;
    if (a > rec.height) {
      rec.height = a;
      rec.argmax = k;
    }
    return true;
  });
  return rec;
}

/// First index k <= phi(N)/2 with |a_N(k)| >= threshold, and that coefficient.
inline std::optional<std::pair<std::int64_t, std::int64_t>> first_coefficient_at_least(
    std::int64_t kernel, std::int64_t threshold, const CyclotomicOptions& opts = {}) {
  CoefficientStream stream(kernel, euler_phi(kernel) / 2, opts);
  std::optional<std::pair<std::int64_t, std::int64_t>> hit;
  stream.for_each([&](std::int64_t k, std::int64_t c) {
    if (c >= threshold || -c >= threshold) {
      hit.emplace(k, c);
      return false;
    }
    return true;
  });
  return hit;
}

/// The unique rho in [1, q-1], sigma in [1, p-1] with 1 + pq = rho p + sigma q.
struct BinaryDecomposition {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t rho = 0;
  std::int64_t sigma = 0;
};

inline BinaryDecomposition binary_decomposition(std::int64_t p, std::int64_t q) {
  require_odd_prime(p);
  require_odd_prime(q);
  if (p >= q) throw std::invalid_argument("binary decomposition needs p < q");
  BinaryDecomposition b{p, q, mod_inverse(p, q), mod_inverse(q, p)};
  if (b.rho * p + b.sigma * q != 1 + p * q) throw std::logic_error("binary decomposition identity failed");
  return b;
}

/// a_pq(m) for 0 <= m < pq from the closed form in alpha_1, beta_1.
inline int binary_coefficient(const BinaryDecomposition& bd, std::int64_t m) {
  const std::int64_t p = bd.p, q = bd.q;
  if (m < 0 || m >= p * q) throw std::out_of_range("binary coefficient index outside [0, pq)");
  // alpha_1 p = m (mod q) and beta_1 q = m (mod p)
  const std::int64_t alpha = m % q * bd.rho % q;
  const std::int64_t beta = m % p * bd.sigma % p;
  const std::int64_t s = alpha * p + beta * q;
  if (s == m && alpha < bd.rho && beta < bd.sigma) return 1;
  if (s == m + p * q && alpha >= bd.rho && beta >= bd.sigma) return -1;
  return 0;
}

inline int binary_coefficient(std::int64_t p, std::int64_t q, std::int64_t m) {
  return binary_coefficient(binary_decomposition(p, q), m);
}

/// Inputs and value of the bound A(pqr) <= min(2a + b, p - b).
struct TernaryBoundData {
  std::int64_t p = 0, q = 0, r = 0;
  std::int64_t qbar = 0, rbar = 0;
  std::int64_t a = 0, b = 0;
  std::int64_t bound = 0;
};

inline TernaryBoundData bzdega_bound(std::int64_t p, std::int64_t q, std::int64_t r) {
  require_odd_prime(p);
  require_odd_prime(q);
  require_odd_prime(r);
  if (!(p < q && q < r)) throw std::invalid_argument("bound needs p < q < r");
  TernaryBoundData t{p, q, r, mod_inverse(q, p), mod_inverse(r, p)};
  t.a = std::min({t.qbar, t.rbar, p - t.qbar, p - t.rbar});
  t.b = std::max(std::min(t.qbar, p - t.qbar), std::min(t.rbar, p - t.rbar));
  t.bound = std::min(2 * t.a + t.b, p - t.b);
  return t;
}

enum class MpqMode { residue_classes, brute };

struct MpqOptions {
  MpqMode mode = MpqMode::residue_classes;
  /// brute mode: largest r considered.
  std::int64_t r_limit = 0;
  /// residue-class mode: representatives are searched up to this r
  /// (0 means 2000 * p * q).
  std::int64_t representative_cap = 0;
  /// residue-class mode: use two primes per class and compare their heights.
  bool paranoid = false;
  unsigned jobs = 1;
};

struct MpqResult {
  std::int64_t p = 0, q = 0;
  std::int64_t value = 0;
  MpqMode mode = MpqMode::residue_classes;
  /// Only a lower bound for max_r A(pqr): brute mode, or an unstable class.
  bool lower_bound_only = false;
  /// false if a paranoid double sample disagreed within a class.
  bool stable = true;
  std::int64_t witness_r = 0;
  std::int64_t classes = 0;
  std::int64_t triples = 0;
};

/// max A(pqr) over primes r > q.
///
/// residue_classes: one prime representative per invertible class mod pq,
/// relying on A(pqr) depending only on r mod pq.
/// brute: all primes q < r <= r_limit; a lower bound only.
inline MpqResult max_height_pq(std::int64_t p, std::int64_t q, const MpqOptions& opts = {}) {
  require_odd_prime(p);
  require_odd_prime(q);
  if (p >= q) throw std::invalid_argument("max_height_pq needs p < q");
  MpqResult res;
  res.p = p;
  res.q = q;
  res.mode = opts.mode;
  const std::int64_t pq = p * q;
  auto ternary_height = [&](std::int64_t r) { return height(pq * r).height; };

  if (opts.mode == MpqMode::brute) {
    res.lower_bound_only = true;
    auto rs = primes_in({q, std::max(q, opts.r_limit)});
    auto hs = parallel_map(rs.size(), opts.jobs, [&](std::size_t i) { return ternary_height(rs[i]); });
    res.triples = static_cast<std::int64_t>(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (hs[i] > res.value) {
        res.value = hs[i];
        res.witness_r = rs[i];
      }
    return res;
  }

  const std::int64_t cap = opts.representative_cap > 0 ? opts.representative_cap : 2000 * pq;
  std::vector<std::int64_t> classes;
  for (std::int64_t s = 1; s < pq; ++s)
    if (s % p != 0 && s % q != 0) classes.push_back(s);
  const std::size_t per_class = opts.paranoid ? 2 : 1;

  struct ClassResult {
    std::int64_t r;
    std::int64_t h;
    bool stable;
  };
  auto results = parallel_map(classes.size(), opts.jobs, [&](std::size_t i) {
    const std::int64_t s = classes[i];
    std::vector<std::int64_t> reps;
    std::int64_t r = s;  // smallest r > q in the class
    if (r <= q) r += ((q - r) / pq + 1) * pq;
    for (; r <= cap && reps.size() < per_class; r += pq)
      if (is_prime(r)) reps.push_back(r);
    if (reps.size() < per_class) throw RepresentativeNotFound(s, pq, cap);
    ClassResult cr{reps[0], ternary_height(reps[0]), true};
    if (per_class == 2) {
      std::int64_t h2 = ternary_height(reps[1]);
      cr.stable = h2 == cr.h;
      if (h2 > cr.h) {
        cr.h = h2;
        cr.r = reps[1];
      }
    }
    return cr;
  });
  res.classes = static_cast<std::int64_t>(classes.size());
  res.triples = res.classes * static_cast<std::int64_t>(per_class);
  for (const auto& cr : results) {
    res.stable = res.stable && cr.stable;
    if (cr.h > res.value) {
      res.value = cr.h;
      res.witness_r = cr.r;
    }
  }
  res.lower_bound_only = !res.stable;
  return res;
}

}  // namespace beiterlab
