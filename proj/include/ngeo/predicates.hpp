// Exact-arithmetic geometric kernels. These define ground truth; everything
// else reads geometry through the noise layer wrapping them.
//
// Coordinates are bounded by kCoordBound (super-triangle helpers may go up to
// 8x that), so orient2d fits in 64/128-bit and the lifted in-circle
// determinant stays far below the 128-bit limit.
#pragma once

#include "ngeo/core.hpp"

namespace ngeo {

// Sign of det[[b-a],[c-a]]: +1 counterclockwise, -1 clockwise, 0 collinear.
inline Sign orient2d(Point2 a, Point2 b, Point2 c) {
  const i128 lhs = i128(b.x - a.x) * i128(c.y - a.y);
  const i128 rhs = i128(b.y - a.y) * i128(c.x - a.x);
  return sign_of(lhs - rhs);
}

// +1 iff d lies strictly inside the circumcircle of the CCW triangle (a,b,c),
// -1 strictly outside, 0 cocircular. Requires orient2d(a,b,c) != 0.
inline Sign in_circle(Point2 a, Point2 b, Point2 c, Point2 d) {
  if (orient2d(a, b, c) == Sign::zero)
    throw GeneralPositionViolation("in_circle: collinear triangle");
  const i128 adx = a.x - d.x, ady = a.y - d.y;
  const i128 bdx = b.x - d.x, bdy = b.y - d.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  const i128 ad2 = adx * adx + ady * ady;
  const i128 bd2 = bdx * bdx + bdy * bdy;
  const i128 cd2 = cdx * cdx + cdy * cdy;
  const i128 det = adx * (bdy * cd2 - cdy * bd2) -
                   ady * (bdx * cd2 - cdx * bd2) +
                   ad2 * (bdx * cdy - cdx * bdy);
  return sign_of(det);
}

// Sign of orient2d(s.a, s.b, q) for s stored left-to-right:
// +1 means q is strictly above the supporting line of s.
inline Sign above_segment(Point2 q, const Segment2& s) {
  return orient2d(s.a, s.b, q);
}

inline Sign compare_x(Point2 a, Point2 b) { return sign_of(i128(a.x) - i128(b.x)); }

inline Sign compare_y(Point2 a, Point2 b) { return sign_of(i128(a.y) - i128(b.y)); }

// Sign of |a-b|^2 - |c-d|^2, exact in integers.
inline Sign compare_dist(Point2 a, Point2 b, Point2 c, Point2 d) {
  const i128 abx = a.x - b.x, aby = a.y - b.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  return sign_of(abx * abx + aby * aby - cdx * cdx - cdy * cdy);
}

inline i128 squared_dist(Point2 a, Point2 b) {
  const i128 dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Lexicographic (x, then y) three-way comparison.
inline Sign compare_xy(Point2 a, Point2 b) {
  const Sign sx = compare_x(a, b);
  return sx != Sign::zero ? sx : compare_y(a, b);
}

}  // namespace ngeo
