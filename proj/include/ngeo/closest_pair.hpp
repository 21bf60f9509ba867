// Plane-sweep closest pair on noisy comparisons: noisy sort by x, a y-table
// in a noisy balanced tree, repetition-amplified deactivation and distance
// tests, structural neighbor selection.
#pragma once

#include <utility>
#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/noise.hpp"
#include "ngeo/walk.hpp"

namespace ngeo {

struct ClosestPairConfig {
  double c = 2.0;
  double p_e_max = 1.0 / 16.0;
  int max_retries = 3;
  u32 neighbor_span = 7;  // structural predecessors/successors examined
};

// Returns the unique closest pair (indices ordered ascending), correct with
// probability 1 - O(n * epsilon).
std::pair<u32, u32> closest_pair(const std::vector<Point2>& points, NoisyContext& ctx,
                                 const ClosestPairConfig& cfg, WalkStats* stats = nullptr);

}  // namespace ngeo
