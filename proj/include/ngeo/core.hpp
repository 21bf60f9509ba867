// Core domain types shared by every module: grid points, segments, exact
// signs, and the error taxonomy.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ngeo {

using i64 = std::int64_t;
using i128 = __int128;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Input coordinates live on a bounded integer grid so that every determinant
// below is exactly representable in fixed-width arithmetic.
inline constexpr i64 kCoordBound = i64{1} << 20;
// Bounding box for trapezoidal decompositions, strictly containing the grid.
inline constexpr i64 kBoxBound = i64{1} << 21;

struct Point2 {
  i64 x = 0;
  i64 y = 0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Endpoints of trapezoid-map inputs are stored left-to-right (a.x < b.x).
struct Segment2 {
  Point2 a;
  Point2 b;
  friend bool operator==(const Segment2&, const Segment2&) = default;
};

enum class Sign : int { negative = -1, zero = 0, positive = 1 };

inline int value(Sign s) { return static_cast<int>(s); }

inline Sign sign_of(i128 v) {
  if (v > 0) return Sign::positive;
  if (v < 0) return Sign::negative;
  return Sign::zero;
}

inline Sign operator-(Sign s) { return static_cast<Sign>(-value(s)); }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidNoiseLevel : Error {
  using Error::Error;
};
struct GeneralPositionViolation : Error {
  using Error::Error;
};
struct CrossingSegments : Error {
  using Error::Error;
};
struct BudgetExhausted : Error {
  using Error::Error;
};
struct StructuralError : Error {
  using Error::Error;
};
struct InvalidHandle : Error {
  using Error::Error;
};
struct EmptyStructure : Error {
  using Error::Error;
};
struct TooFewPoints : Error {
  using Error::Error;
};
struct GenerationBudgetExceeded : Error {
  using Error::Error;
};

inline bool in_coord_range(Point2 p, i64 bound = kCoordBound) {
  return p.x >= -bound && p.x <= bound && p.y >= -bound && p.y <= bound;
}

}  // namespace ngeo
