// Exact rational coordinates for sweep events. Crossing points of grid
// segments have numerators below 2^66 and denominators below 2^44, so every
// comparison here fits in signed 128-bit products (bounds derived from the
// coordinate cap in core.hpp).
#pragma once

#include <optional>

#include "ngeo/core.hpp"
#include "ngeo/predicates.hpp"

namespace ngeo {

struct Rat {
  i128 num = 0;
  i128 den = 1;  // always > 0

  static Rat of(i64 v) { return {v, 1}; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num * b.den == b.num * a.den; }
};

inline Sign cmp(const Rat& a, const Rat& b) { return sign_of(a.num * b.den - b.num * a.den); }

inline Sign cmp(const Rat& a, i64 b) { return sign_of(a.num - i128(b) * a.den); }

inline double approx(const Rat& r) { return double((long double)r.num / (long double)r.den); }

// Proper interior crossing test: endpoints of each segment strictly straddle
// the other's supporting line.
inline bool properly_cross(const Segment2& s, const Segment2& t) {
  const int o1 = value(orient2d(s.a, s.b, t.a));
  const int o2 = value(orient2d(s.a, s.b, t.b));
  const int o3 = value(orient2d(t.a, t.b, s.a));
  const int o4 = value(orient2d(t.a, t.b, s.b));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

// Exact crossing point of two properly crossing segments; empty if the
// supporting lines are parallel.
inline std::optional<std::pair<Rat, Rat>> line_crossing(const Segment2& s, const Segment2& t) {
  const i128 d1x = s.b.x - s.a.x, d1y = s.b.y - s.a.y;
  const i128 d2x = t.b.x - t.a.x, d2y = t.b.y - t.a.y;
  i128 den = d1x * d2y - d1y * d2x;
  if (den == 0) return std::nullopt;
  i128 tnum = (i128(t.a.x) - s.a.x) * d2y - (i128(t.a.y) - s.a.y) * d2x;
  if (den < 0) {
    den = -den;
    tnum = -tnum;
  }
  return std::make_pair(Rat{i128(s.a.x) * den + tnum * d1x, den},
                        Rat{i128(s.a.y) * den + tnum * d1y, den});
}

// Sign of y_s(x0) - y_t(x0) for two non-vertical segments at a rational
// abscissa spanned by both; the magnitude stays below 2^110.
inline Sign height_diff_at(const Segment2& s, const Segment2& t, const Rat& x0) {
  const i128 dx1 = s.b.x - s.a.x, dy1 = s.b.y - s.a.y;
  const i128 dx2 = t.b.x - t.a.x, dy2 = t.b.y - t.a.y;
  const i128 a = dy1 * dx2 - dy2 * dx1;
  const i128 b = (i128(s.a.y) * dx1 - i128(s.a.x) * dy1) * dx2 -
                 (i128(t.a.y) * dx2 - i128(t.a.x) * dy2) * dx1;
  // dx1, dx2 > 0 for left-to-right segments, so the common denominator is
  // positive and the sign is carried entirely by the numerator.
  return sign_of(a * x0.num + b * x0.den);
}

// Sign of y_s(x) - y for integer x strictly inside the segment's x-range.
inline Sign height_vs_y_at(const Segment2& s, i64 x, i64 y) {
  const i128 dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
  return sign_of(i128(s.a.y) * dx + dy * (i128(x) - s.a.x) - i128(y) * dx);
}

// Sign of y_s(x) - y_t(x) at integer x spanned by both segments.
inline Sign height_diff_at_int(const Segment2& s, const Segment2& t, i64 x) {
  return height_diff_at(s, t, Rat::of(x));
}

}  // namespace ngeo
