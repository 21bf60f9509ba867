// Static 2D convex hull: noisy lexicographic sort, then a two-pass monotone
// scan whose orientation tests are repetition-amplified.
#pragma once

#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/noise.hpp"
#include "ngeo/walk.hpp"

namespace ngeo {

struct HullConfig {
  double c = 2.0;
  double p_e_max = 1.0 / 16.0;
  int max_retries = 3;
};

// CCW hull vertex sequence starting at the lexicographically smallest point,
// equal to the exact hull with probability 1 - O(n * epsilon).
std::vector<Point2> convex_hull_2d(const std::vector<Point2>& points, NoisyContext& ctx,
                                   const HullConfig& cfg, WalkStats* stats = nullptr);

}  // namespace ngeo
