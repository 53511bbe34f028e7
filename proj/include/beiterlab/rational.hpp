#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "beiterlab/errors.hpp"

namespace beiterlab {

namespace detail {

using i128 = __int128;

constexpr i128 abs128(i128 v) { return v < 0 ? -v : v; }

constexpr i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr bool fits_i64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace detail

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized: gcd(num, den) = 1 and den > 0. Intermediate products are
/// formed in 128 bits; a result that does not fit back into 64 bits throws
/// OverflowError.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  constexpr Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  constexpr bool is_integer() const { return den_ == 1; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// floor(num/den)
  constexpr std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    return (num_ % den_ != 0 && num_ < 0) ? q - 1 : q;
  }
  constexpr std::int64_t ceil() const {
    std::int64_t q = num_ / den_;
    return (num_ % den_ != 0 && num_ > 0) ? q + 1 : q;
  }

  constexpr Rational operator-() const { return from128(-detail::i128{num_}, den_); }

  friend constexpr Rational operator+(const Rational& a, const Rational& b) {
    using detail::i128;
    return from128(i128{a.num_} * b.den_ + i128{b.num_} * a.den_, i128{a.den_} * b.den_);
  }
  friend constexpr Rational operator-(const Rational& a, const Rational& b) {
    using detail::i128;
    return from128(i128{a.num_} * b.den_ - i128{b.num_} * a.den_, i128{a.den_} * b.den_);
  }
  friend constexpr Rational operator*(const Rational& a, const Rational& b) {
    using detail::i128;
    return from128(i128{a.num_} * b.num_, i128{a.den_} * b.den_);
  }
  friend constexpr Rational operator/(const Rational& a, const Rational& b) {
    using detail::i128;
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from128(i128{a.num_} * b.den_, i128{a.den_} * b.num_);
  }
  constexpr Rational& operator+=(const Rational& o) { return *this = *this + o; }
  constexpr Rational& operator-=(const Rational& o) { return *this = *this - o; }
  constexpr Rational& operator*=(const Rational& o) { return *this = *this * o; }
  constexpr Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
  friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    using detail::i128;
    return i128{a.num_} * b.den_ <=> i128{b.num_} * a.den_;
  }

  /// Exact value of a finite double. Throws OverflowError when the value needs
  /// more than 64 bits in numerator or denominator.
  static Rational from_double(double v) {
    if (!std::isfinite(v)) throw OverflowError("non-finite double has no rational value");
    if (v == 0.0) return Rational{};
    int exp = 0;
    double mant = std::frexp(v, &exp);  // v = mant * 2^exp, 0.5 <= |mant| < 1
    auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    while (exp < 0 && (m & 1) == 0) {
      m /= 2;
      ++exp;
    }
    if (exp >= 0) {
      if (exp > 62) throw OverflowError("double too large for rational");
      return from128(detail::i128{m} << exp, 1);
    }
    if (exp < -62) throw OverflowError("double too small for rational");
    return Rational(m, std::int64_t{1} << -exp);
  }

  /// Parses "a", "a/b" or a plain decimal "a.bcd".
  static Rational parse(std::string_view s) {
    auto bad = [&] { return std::invalid_argument("not a rational: '" + std::string(s) + "'"); };
    auto to_int = [&](std::string_view t) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) throw bad();
      return v;
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
      std::int64_t d = to_int(s.substr(slash + 1));
      if (d == 0) throw bad();
      return Rational(to_int(s.substr(0, slash)), d);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view whole = s.substr(0, dot);
      std::string_view frac = s.substr(dot + 1);
      bool neg = !whole.empty() && whole.front() == '-';
      if (neg) whole.remove_prefix(1);
      if (frac.empty() || frac.size() > 18 || frac.front() == '-' || frac.front() == '+') throw bad();
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rational r = Rational(whole.empty() ? 0 : to_int(whole)) + Rational(to_int(frac), scale);
      return neg ? -r : r;
    }
    return Rational(to_int(s));
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static constexpr Rational from128(detail::i128 n, detail::i128 d) {
    Rational r;
    r.assign128(n, d);
    return r;
  }
  constexpr void assign(std::int64_t n, std::int64_t d) { assign128(n, d); }
  constexpr void assign128(detail::i128 n, detail::i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::i128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (!detail::fits_i64(n) || !detail::fits_i64(d)) throw OverflowError("rational overflow");
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Exact three-way comparison of a rational against a finite double.
inline std::partial_ordering compare(const Rational& r, double v) {
  if (std::isnan(v)) return std::partial_ordering::unordered;
  if (std::isinf(v)) return v > 0 ? std::partial_ordering::less : std::partial_ordering::greater;
  // Cheap path: far apart in binary64.
  double rd = r.to_double();
  double slack = 1e-9 * (std::abs(rd) + std::abs(v) + 1.0);
  if (rd < v - slack) return std::partial_ordering::less;
  if (rd > v + slack) return std::partial_ordering::greater;
  // |v| < 2^-64 is below every nonzero rational with a 64-bit denominator.
  if (std::abs(v) < 0x1p-64) {
    if (r == Rational{}) return 0.0 <=> v;
    return r.num() > 0 ? std::partial_ordering::greater : std::partial_ordering::less;
  }
  try {
    return r <=> Rational::from_double(v);
  } catch (const OverflowError&) {
    // 2^-64 <= |v| < 2^-62 with a long mantissa; extended precision settles it.
    return static_cast<long double>(r.num()) / static_cast<long double>(r.den()) <=> static_cast<long double>(v);
  }
}

}  // namespace beiterlab
