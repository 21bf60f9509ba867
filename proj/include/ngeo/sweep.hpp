// Bentley-Ottmann plane sweep on noisy comparisons: event queue and sweep
// status both live in noisy balanced trees, crossing detection uses the
// repetition strategy, and duplicate crossing events are suppressed by
// handle-pair identity.
#pragma once

#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/exact_oracles.hpp"
#include "ngeo/noise.hpp"
#include "ngeo/walk.hpp"

namespace ngeo {

struct SweepConfig {
  double c = 2.0;  // epsilon = n^-c per tree operation; amplification n^-(c+1)
  double p_e_max = 1.0 / 16.0;
  int max_retries = 3;
};

// A cell of the vertical decomposition: the gap between two vertically
// adjacent segments (or box sentinels) over an x-interval.
struct SweepTrap {
  int below = kTrapBottomSentinel;  // segment id or sentinel
  int above = kTrapTopSentinel;
  Rat x_left, x_right;
};

struct SweepResult {
  std::vector<CrossingRecord> crossings;  // in sweep (reported) order
  std::vector<SweepTrap> trapezoids;      // populated when emit_trapezoids
  WalkStats stats;
};

SweepResult intersect_segments(const std::vector<Segment2>& segments, NoisyContext& ctx,
                               const SweepConfig& cfg, bool emit_trapezoids = false);

}  // namespace ngeo
