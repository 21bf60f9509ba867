// Stress scenario for the generalized valid/goal-set walk: a complete binary
// tree with one valid root-to-leaf path whose nodes alternate between
// non-goal and goal, driven by a three-branch oracle. The generalized walk
// (no termination-undo case) waits at each goal for the forcing branch and
// needs Theta(log^2 n / log log n) steps in expectation, strictly more than
// the path-guided budget.
#pragma once

#include <vector>

#include "ngeo/core.hpp"

namespace ngeo {

struct CounterexampleConfig {
  u32 log2_n = 10;      // tree height; n = 2^log2_n
  u32 trials = 1000;
  u64 seed = 1;
  double K = 0.2;       // forcing-branch constant; capped so the branch fits under 1/15
  double c = 2.0;       // termination threshold = ceil(4 * log2(n^c))
  double honest = 14.0 / 15.0;
  double third_branch_override = -1.0;  // >= 0 replaces the invalid-child probability
  double k_branch_override = -1.0;      // >= 0 replaces the forcing probability
  u64 step_cap = 0;                     // 0: generous default
};

struct CounterexampleResult {
  double mean_steps = 0;
  double leaf_goal_rate = 0;      // trials terminating at the valid leaf
  double goal_terminal_rate = 0;  // trials terminating at any goal node
  double predicted_escape = 0;    // (1 - forcing)^threshold, per goal visit
  double forcing_probability = 0;
  u64 threshold = 0;
  u64 capped_trials = 0;
};

CounterexampleResult run_counterexample(const CounterexampleConfig& cfg);

}  // namespace ngeo
