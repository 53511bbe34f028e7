#pragma once

// Seeded random regions for the lemma sweeps. Draws go through mt19937_64 and
// plain modular reduction, so a (seed, p) pair yields the same regions on every
// platform (std distributions are implementation-defined).

#include <cstdint>
#include <random>

#include "beiterlab/inversegeo.hpp"
#include "beiterlab/rational.hpp"

namespace beiterlab {

class RegionSampler {
 public:
  RegionSampler(std::uint64_t seed, std::int64_t p)
      : rng_(seed * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(p)), p_(p) {}

  /// Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng_() % span);
  }

  /// Integer bounds 0 <= a < b <= p-1 on both axes.
  Rectangle rectangle() {
    auto side = [&] {
      std::int64_t a = uniform(0, p_ - 1), b = uniform(0, p_ - 1);
      while (a == b) b = uniform(0, p_ - 1);
      return a < b ? std::pair{a, b} : std::pair{b, a};
    };
    const auto [x0, x1] = side();
    const auto [y0, y1] = side();
    return {Rational(x0), Rational(x1), Rational(y0), Rational(y1)};
  }

  /// Non-degenerate triangle in [0, p-1]^2 with vertex coordinates k/d,
  /// d in {1, 2, 3, 4}. With `axis_right` the legs are parallel to the axes.
  Triangle triangle(bool axis_right) {
    for (;;) {
      const Point a = point(), b = point();
      const Point c = axis_right ? Point{a.x, b.y} : point();
      if (detail::cross(a, b, c) != Rational(0)) return Triangle(a, b, c);
    }
  }

 private:
  Rational coordinate() {
    const std::int64_t d = uniform(1, 4);
    return Rational(uniform(0, d * (p_ - 1)), d);
  }
  Point point() { return {coordinate(), coordinate()}; }

  std::mt19937_64 rng_;
  std::int64_t p_;
};

}  // namespace beiterlab
