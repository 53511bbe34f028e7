#pragma once

// Kloosterman sums and counts of inverse pairs (x, x^-1 mod p) inside
// rectangles and triangles. Region membership is exact; floating point is
// used only for exponential sums and the transcendental bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beiterlab/numtheory.hpp"
#include "beiterlab/rational.hpp"

namespace beiterlab {

// ---------------------------------------------------------------------------
// Kloosterman sums

namespace detail {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

}  // namespace detail

struct KloostermanValue {
  std::int64_t a = 0, b = 0, p = 0;
  double value = 0;      // real part of the sum
  double imag = 0;       // residual imaginary part, zero up to rounding
  double weil_bound = 0; // 2 sqrt(p)
  double tolerance = 0;  // 1e-6 sqrt(p)
  bool pass = false;
};

struct IncompleteKloosterman {
  std::int64_t b = 0, p = 0, lo = 0, hi = 0;
  std::complex<double> value;
  double bound = 0;  // (2 + log p) sqrt(p)
  bool pass = false;
};

/// Evaluates K(a, b; p) = sum_{x=1}^{p-1} e((a x + b x^-1) / p) by direct
/// summation over a shared inverse table and a table of p-th roots of unity.
class KloostermanEvaluator {
 public:
  explicit KloostermanEvaluator(std::int64_t p) : inv_(p) {
    cos_.resize(static_cast<std::size_t>(p));
    sin_.resize(static_cast<std::size_t>(p));
    for (std::int64_t k = 0; k < p; ++k) {
      const double angle = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p);
      cos_[static_cast<std::size_t>(k)] = std::cos(angle);
      sin_[static_cast<std::size_t>(k)] = std::sin(angle);
    }
  }

  std::int64_t modulus() const { return inv_.modulus(); }
  const InverseTable& inverses() const { return inv_; }

  KloostermanValue operator()(std::int64_t a, std::int64_t b) const {
    const std::int64_t p = modulus();
    const std::int64_t am = detail::mod(a, p), bm = detail::mod(b, p);
    detail::CompensatedSum re, im;
    for (std::int64_t x = 1; x < p; ++x) {
      const auto k = static_cast<std::size_t>((am * x + bm * inv_[x]) % p);
      re.add(cos_[k]);
      im.add(sin_[k]);
    }
    KloostermanValue v;
    v.a = a;
    v.b = b;
    v.p = p;
    v.value = re.value();
    v.imag = im.value();
    const double root = std::sqrt(static_cast<double>(p));
    v.weil_bound = 2 * root;
    v.tolerance = 1e-6 * root;
    v.pass = std::abs(v.imag) <= v.tolerance && std::abs(v.value) <= v.weil_bound + v.tolerance;
    return v;
  }

  /// sum over x in (lo, hi], p not dividing x, of e(-b x^-1 / p).
  IncompleteKloosterman incomplete(std::int64_t b, std::int64_t lo, std::int64_t hi) const {
    const std::int64_t p = modulus();
    if (lo < 0 || lo > hi || hi > p - 1) throw std::invalid_argument("interval must satisfy 0 <= lo <= hi < p");
    const std::int64_t bm = detail::mod(-b, p);
    detail::CompensatedSum re, im;
    for (std::int64_t x = lo + 1; x <= hi; ++x) {
      const auto k = static_cast<std::size_t>(bm * inv_[x] % p);
      re.add(cos_[k]);
      im.add(sin_[k]);
    }
    IncompleteKloosterman r;
    r.b = b;
    r.p = p;
    r.lo = lo;
    r.hi = hi;
    r.value = {re.value(), im.value()};
    const double x = static_cast<double>(p);
    r.bound = (2 + std::log(x)) * std::sqrt(x);
    r.pass = std::abs(r.value) <= r.bound;
    return r;
  }

 private:
  InverseTable inv_;
  std::vector<double> cos_, sin_;
};

inline KloostermanValue kloosterman(std::int64_t a, std::int64_t b, std::int64_t p) {
  return KloostermanEvaluator(p)(a, b);
}

inline IncompleteKloosterman incomplete_kloosterman(std::int64_t b, std::int64_t p, std::int64_t lo,
                                                    std::int64_t hi) {
  return KloostermanEvaluator(p).incomplete(b, lo, hi);
}

// ---------------------------------------------------------------------------
// Regions

struct Point {
  Rational x, y;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class Closure {
  half_open_low,   // [a, b) x [c, d)
  half_open_high,  // (a, b] x (c, d]
};

struct Rectangle {
  Rational x_lo, x_hi, y_lo, y_hi;
  Closure closure = Closure::half_open_high;

  Rational area() const { return (x_hi - x_lo) * (y_hi - y_lo); }

  bool contains(const Rational& x, const Rational& y) const {
    if (closure == Closure::half_open_low) return x_lo <= x && x < x_hi && y_lo <= y && y < y_hi;
    return x_lo < x && x <= x_hi && y_lo < y && y <= y_hi;
  }

  /// Integers v with v in the x (or y) side, as a closed range [first, last].
  std::pair<std::int64_t, std::int64_t> integer_span(const Rational& lo, const Rational& hi) const {
    if (closure == Closure::half_open_low) return {lo.ceil(), hi.ceil() - 1};
    return {lo.floor() + 1, hi.floor()};
  }
};

/// Throws unless x_lo < x_hi <= p and y_lo < y_hi <= p with all bounds >= 0.
inline void require_within(const Rectangle& r, std::int64_t p) {
  const Rational zero(0), top(p);
  if (!(zero <= r.x_lo && r.x_lo < r.x_hi && r.x_hi <= top && zero <= r.y_lo && r.y_lo < r.y_hi &&
        r.y_hi <= top))
    throw std::invalid_argument("rectangle must satisfy 0 <= lo < hi <= p on both axes");
}

namespace detail {

// sign of a*x + b*y + c, integer coefficients
struct HalfPlane {
  std::int64_t a = 0, b = 0, c = 0;
  __int128 eval(std::int64_t x, std::int64_t y) const {
    return static_cast<__int128>(a) * x + static_cast<__int128>(b) * y + c;
  }
};

inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  const __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
  if (!fits_i64(l)) throw OverflowError("denominator lcm overflow");
  return static_cast<std::int64_t>(l);
}

// Positive multiple of cross(to - from, P - from) as an integer linear form in P.
inline HalfPlane edge_form(const Point& from, const Point& to) {
  const Rational dx = to.x - from.x, dy = to.y - from.y;
  // cross = dx (Py - fy) - dy (Px - fx) = -dy Px + dx Py + (dy fx - dx fy)
  const Rational a = -dy, b = dx, c = dy * from.x - dx * from.y;
  const std::int64_t scale = lcm_checked(lcm_checked(a.den(), b.den()), c.den());
  return {(a * scale).num(), (b * scale).num(), (c * scale).num()};
}

inline Rational cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace detail

/// Triangle with exact rational vertices.
///
/// Degenerate (zero-area) triangles must be requested explicitly; they contain
/// only the points of their segment, and only when the boundary is included.
class Triangle {
 public:
  Triangle(Point a, Point b, Point c, bool boundary_included = true, bool allow_degenerate = false)
      : v_{a, b, c}, boundary_(boundary_included) {
    const Rational twice = detail::cross(a, b, c);
    degenerate_ = twice == Rational(0);
    if (degenerate_ && !allow_degenerate) throw std::invalid_argument("degenerate triangle");
    area_ = twice < Rational(0) ? -twice / Rational(2) : twice / Rational(2);
    if (!degenerate_) {
      // Orient counter-clockwise so every interior point is on the positive side.
      std::array<Point, 3> ccw = v_;
      if (twice < Rational(0)) std::swap(ccw[1], ccw[2]);
      for (int i = 0; i < 3; ++i) edges_[i] = detail::edge_form(ccw[i], ccw[(i + 1) % 3]);
    }
    x_min_ = std::min({a.x, b.x, c.x});
    x_max_ = std::max({a.x, b.x, c.x});
    y_min_ = std::min({a.y, b.y, c.y});
    y_max_ = std::max({a.y, b.y, c.y});
  }

  const std::array<Point, 3>& vertices() const { return v_; }
  bool boundary_included() const { return boundary_; }
  bool degenerate() const { return degenerate_; }
  Rational area() const { return area_; }
  const Rational& x_min() const { return x_min_; }
  const Rational& x_max() const { return x_max_; }
  const Rational& y_min() const { return y_min_; }
  const Rational& y_max() const { return y_max_; }

  bool contains(std::int64_t x, std::int64_t y) const {
    const Rational rx(x), ry(y);
    if (rx < x_min_ || rx > x_max_ || ry < y_min_ || ry > y_max_) return false;
    if (degenerate_) {
      if (!boundary_) return false;
      const Point p{rx, ry};
      return detail::cross(v_[0], v_[1], p) == Rational(0) && detail::cross(v_[0], v_[2], p) == Rational(0) &&
             detail::cross(v_[1], v_[2], p) == Rational(0);
    }
    for (const auto& e : edges_) {
      const __int128 s = e.eval(x, y);
      if (s < 0 || (s == 0 && !boundary_)) return false;
    }
    return true;
  }

  /// Index of the right-angle vertex whose legs are parallel to the axes.
  std::optional<int> axis_right_vertex() const {
    if (degenerate_) return std::nullopt;
    for (int i = 0; i < 3; ++i) {
      const Point& o = v_[i];
      const Point& u = v_[(i + 1) % 3];
      const Point& w = v_[(i + 2) % 3];
      if ((u.x == o.x && w.y == o.y) || (u.y == o.y && w.x == o.x)) return i;
    }
    return std::nullopt;
  }
  bool is_axis_right() const { return axis_right_vertex().has_value(); }

 private:
  std::array<Point, 3> v_;
  bool boundary_;
  bool degenerate_ = false;
  Rational area_;
  std::array<detail::HalfPlane, 3> edges_{};
  Rational x_min_, x_max_, y_min_, y_max_;
};

/// Throws unless all vertices lie in [0, p-1]^2.
inline void require_within(const Triangle& t, std::int64_t p) {
  const Rational zero(0), top(p - 1);
  for (const auto& v : t.vertices())
    if (v.x < zero || v.x > top || v.y < zero || v.y > top)
      throw std::invalid_argument("triangle must lie in [0, p-1]^2");
}

/// The triangles spanned by the lattice inequalities of B-x(p) and B+x(p).
/// With the boundary included they hold exactly the lattice points of the
/// sets: the strict edge x > y of B-x carries no inverse pair since x^2 = 1
/// forces x = 1 or p - 1.
inline Triangle beiter_minus_triangle(std::int64_t p, bool boundary_included = true) {
  if (p < 11) throw std::invalid_argument("Beiter triangles need p >= 11");
  const Rational third(p - 1, 3), right(p - 3, 2);
  return Triangle({third, third}, {right, right}, {right, Rational(p + 1, 4)}, boundary_included);
}

inline Triangle beiter_plus_triangle(std::int64_t p, bool boundary_included = true) {
  if (p < 11) throw std::invalid_argument("Beiter triangles need p >= 11");
  const Rational right(p - 3, 2);
  return Triangle({Rational(p, 3), Rational(2 * p, 3)}, {right, Rational(p + 3, 2)}, {right, Rational(p - 3)},
                  boundary_included);
}

// ---------------------------------------------------------------------------
// Counting I(region) = #{(x, y) in region : x y = 1 (mod p)}

inline std::int64_t count_inverse_points(const Rectangle& r, const InverseTable& inv) {
  const std::int64_t p = inv.modulus();
  auto [x0, x1] = r.integer_span(r.x_lo, r.x_hi);
  auto [y0, y1] = r.integer_span(r.y_lo, r.y_hi);
  x0 = std::max<std::int64_t>(x0, 1);
  x1 = std::min<std::int64_t>(x1, p - 1);
  std::int64_t count = 0;
  for (std::int64_t x = x0; x <= x1; ++x) {
    const std::int64_t y = inv[x];
    count += (y >= y0 && y <= y1) ? 1 : 0;
  }
  return count;
}

inline std::int64_t count_inverse_points(const Triangle& t, const InverseTable& inv) {
  const std::int64_t p = inv.modulus();
  const std::int64_t x0 = std::max<std::int64_t>(1, t.x_min().ceil());
  const std::int64_t x1 = std::min<std::int64_t>(p - 1, t.x_max().floor());
  std::int64_t count = 0;
  for (std::int64_t x = x0; x <= x1; ++x) count += t.contains(x, inv[x]) ? 1 : 0;
  return count;
}

inline std::int64_t count_inverse_points(const Rectangle& r, std::int64_t p) {
  return count_inverse_points(r, InverseTable(p));
}
inline std::int64_t count_inverse_points(const Triangle& t, std::int64_t p) {
  return count_inverse_points(t, InverseTable(p));
}

// ---------------------------------------------------------------------------
// Lemma checks

inline double rectangle_lemma_bound(std::int64_t p) {
  const double x = static_cast<double>(p);
  const double l = std::log(x) + 1.1;
  return std::sqrt(x) * l * l;
}

/// Constants c in |I(T) - Area(T)/p| < c p^(3/4) log p.
inline constexpr double kRightTriangleConstant = 3.0;
inline constexpr double kGeneralTriangleConstant = 12.0;
inline constexpr double kSharpRightTriangleConstant = 2.8320056;

struct RectangleLemmaReport {
  std::int64_t count = 0;
  Rational area_over_p;
  double residual = 0;
  double bound = 0;
  bool pass = false;
};

/// |I(R) - Area(R)/p| < sqrt(p) (log p + 1.1)^2 for integer bounds
/// 0 <= a < b < p, 0 <= c < d < p.
inline RectangleLemmaReport verify_rectangle_lemma(const Rectangle& r, const InverseTable& inv) {
  const std::int64_t p = inv.modulus();
  for (const Rational* v : {&r.x_lo, &r.x_hi, &r.y_lo, &r.y_hi})
    if (!v->is_integer()) throw std::invalid_argument("rectangle lemma needs integer bounds");
  if (!(r.x_lo >= Rational(0) && r.x_lo < r.x_hi && r.x_hi < Rational(p) && r.y_lo >= Rational(0) &&
        r.y_lo < r.y_hi && r.y_hi < Rational(p)))
    throw std::invalid_argument("rectangle lemma needs 0 <= a < b < p and 0 <= c < d < p");
  RectangleLemmaReport rep;
  rep.count = count_inverse_points(r, inv);
  rep.area_over_p = r.area() / Rational(p);
  Rational diff = Rational(rep.count) - rep.area_over_p;
  if (diff < Rational(0)) diff = -diff;
  rep.residual = diff.to_double();
  rep.bound = rectangle_lemma_bound(p);
  rep.pass = compare(diff, rep.bound) < 0;
  return rep;
}

struct TriangleLemmaReport {
  std::int64_t count = 0;
  Rational area_over_p;
  double residual = 0;
  bool axis_right = false;
  double bound_right = 0;    // 3 p^(3/4) log p
  double bound_general = 0;  // 12 p^(3/4) log p
  double bound_sharp = 0;    // 2.8320056 p^(3/4) log p
  bool pass_right = true;    // vacuous unless axis_right
  bool pass_general = false;
  bool sharp_ok = true;      // soft; vacuous unless axis_right

  bool pass() const { return pass_right && pass_general; }
};

inline TriangleLemmaReport verify_triangle_lemma(const Triangle& t, const InverseTable& inv) {
  const std::int64_t p = inv.modulus();
  require_within(t, p);
  TriangleLemmaReport rep;
  rep.count = count_inverse_points(t, inv);
  rep.area_over_p = t.area() / Rational(p);
  Rational diff = Rational(rep.count) - rep.area_over_p;
  if (diff < Rational(0)) diff = -diff;
  rep.residual = diff.to_double();
  const double x = static_cast<double>(p);
  const double base = std::pow(x, 0.75) * std::log(x);
  rep.axis_right = t.is_axis_right();
  rep.bound_right = kRightTriangleConstant * base;
  rep.bound_general = kGeneralTriangleConstant * base;
  rep.bound_sharp = kSharpRightTriangleConstant * base;
  rep.pass_general = compare(diff, rep.bound_general) < 0;
  if (rep.axis_right) {
    rep.pass_right = compare(diff, rep.bound_right) < 0;
    rep.sharp_ok = compare(diff, rep.bound_sharp) < 0;
  }
  return rep;
}

/// b(p) = p^(3/2) (log p + 1.1)^2, the area that forces an inverse point.
inline double capture_box_threshold(std::int64_t p) {
  const double x = static_cast<double>(p);
  const double l = std::log(x) + 1.1;
  return x * std::sqrt(x) * l * l;
}

inline bool capture_box_area_condition(const Rectangle& r, std::int64_t p) {
  require_within(r, p);
  return compare(r.area(), capture_box_threshold(p)) >= 0;
}

// ---------------------------------------------------------------------------
// Dyadic cover of an axis-parallel right triangle

/// Rows 1..n of 2^(j-1) rectangles inside the triangle, each row a quarter of
/// the previous one in rectangle area, plus an outer row n+1 of 2^n rectangles
/// that together with the inner rows covers the whole triangle.
struct DyadicCover {
  int n = 0;
  Rational triangle_area;
  std::vector<std::vector<Rectangle>> inner;  // inner[j-1] is row j
  std::vector<Rectangle> outer_extra;

  std::size_t inner_count() const {
    std::size_t c = 0;
    for (const auto& row : inner) c += row.size();
    return c;
  }
  Rational inner_area() const {
    Rational a;
    for (const auto& row : inner)
      for (const auto& r : row) a += r.area();
    return a;
  }
};

inline DyadicCover dyadic_cover(const Triangle& t, int n) {
  if (n < 1) throw std::invalid_argument("dyadic cover needs n >= 1");
  const auto corner = t.axis_right_vertex();
  if (!corner) throw std::invalid_argument("dyadic cover needs a right triangle with axis-parallel legs");
  const auto& v = t.vertices();
  const Point o = v[*corner];
  const Point u = v[(*corner + 1) % 3];
  const Point w = v[(*corner + 2) % 3];
  // Leg vectors along x and y, signed.
  const Rational leg_x = (u.y == o.y) ? u.x - o.x : w.x - o.x;
  const Rational leg_y = (u.x == o.x) ? u.y - o.y : w.y - o.y;

  // Canonical coordinates (s, t) in [0,1]^2 with s + t <= 1 map to
  // (o.x + s leg_x, o.y + t leg_y).
  auto to_rect = [&](const Rational& s0, const Rational& s1, const Rational& t0, const Rational& t1) {
    Rational xa = o.x + s0 * leg_x, xb = o.x + s1 * leg_x;
    Rational ya = o.y + t0 * leg_y, yb = o.y + t1 * leg_y;
    if (xb < xa) std::swap(xa, xb);
    if (yb < ya) std::swap(ya, yb);
    return Rectangle{xa, xb, ya, yb, Closure::half_open_low};
  };

  DyadicCover cover;
  cover.n = n;
  cover.triangle_area = t.area();
  // Sub-triangle corners of the current level, all with legs `size`.
  std::vector<std::pair<Rational, Rational>> corners{{Rational(0), Rational(0)}};
  Rational size(1);
  for (int j = 1; j <= n; ++j) {
    const Rational half = size / Rational(2);
    std::vector<Rectangle> row;
    std::vector<std::pair<Rational, Rational>> next;
    for (const auto& [s, tt] : corners) {
      row.push_back(to_rect(s, s + half, tt, tt + half));
      next.emplace_back(s, tt + half);
      next.emplace_back(s + half, tt);
    }
    cover.inner.push_back(std::move(row));
    corners = std::move(next);
    size = half;
  }
  for (const auto& [s, tt] : corners) cover.outer_extra.push_back(to_rect(s, s + size, tt, tt + size));
  return cover;
}

/// Row count floor(log2(p)/4 - log2(sqrt(2) (log p + 1.1))), at least 1.
inline int lemma2_rows(std::int64_t p) {
  const double x = static_cast<double>(p);
  const double v = std::log2(x) / 4 - std::log2(std::sqrt(2.0) * (std::log(x) + 1.1));
  return std::max(1, static_cast<int>(std::floor(v)));
}

}  // namespace beiterlab
