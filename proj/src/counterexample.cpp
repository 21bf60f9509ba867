#include "ngeo/counterexample.hpp"

#include <cmath>
#include <random>

#include "ngeo/noise.hpp"

namespace ngeo {

namespace {

// Heap-indexed complete binary tree of height h: root 1, children 2v, 2v+1.
// The valid path is the ancestor chain of a random leaf; goals sit at odd
// depths, and the leaf is always a goal so the walk has somewhere to finish.
struct Scenario {
  u32 height;
  u64 leaf;  // heap index of the valid leaf

  bool valid(u64 v) const {
    u64 t = leaf;
    while (t > v) t >>= 1;
    return t == v;
  }
  u32 depth(u64 v) const {
    u32 d = 0;
    while (v > 1) {
      v >>= 1;
      ++d;
    }
    return d;
  }
  bool goal(u64 v) const {
    const u32 d = depth(v);
    return (d % 2 == 1) || d == height;
  }
  bool is_leaf(u64 v) const { return depth(v) == height; }
  u64 valid_child(u64 v) const {
    u64 t = leaf;
    while (t > 2 * v + 1) t >>= 1;
    return t;
  }
};

}  // namespace

CounterexampleResult run_counterexample(const CounterexampleConfig& cfg) {
  if (cfg.log2_n < 2) throw Error("counterexample needs n >= 4");
  const u32 h = cfg.log2_n;
  const double log2n = double(h);
  const double loglog = std::log2(std::max(2.0, log2n));

  CounterexampleResult out;
  out.threshold = (u64)std::ceil(4.0 * cfg.c * log2n);

  // Forcing branch K*loglog(n)/log(n), capped so the remaining invalid-child
  // branch stays nonnegative inside the 1/15 lie budget.
  double forcing = cfg.K * loglog / log2n;
  const double lie_budget = 1.0 - cfg.honest;
  if (forcing > 0.95 * lie_budget) forcing = 0.95 * lie_budget;
  if (cfg.k_branch_override >= 0) forcing = cfg.k_branch_override;
  double invalid_branch = lie_budget - forcing;
  if (cfg.third_branch_override >= 0) invalid_branch = cfg.third_branch_override;
  out.forcing_probability = forcing;
  out.predicted_escape = std::pow(1.0 - forcing, double(out.threshold));

  const u64 cap = cfg.step_cap ? cfg.step_cap : (u64)(400.0 * cfg.c * log2n * log2n + 4096);

  u64 total_steps = 0;
  u64 leaf_hits = 0, goal_hits = 0;
  for (u32 trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(mix_seed(cfg.seed, trial));
    auto uniform = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    Scenario sc{h, 0};
    sc.leaf = 1;
    for (u32 d = 0; d < h; ++d) sc.leaf = 2 * sc.leaf + (rng() & 1);

    // Generalized walk: invalid answers pop, goal answers push a copy,
    // child answers always advance (no undo-the-stay case here).
    std::vector<u64> stack;
    u64 v = 1;
    u64 run = 0;  // current repetition run at the top of the stack
    u64 steps = 0;
    u64 terminal = 0;
    while (steps < cap) {
      ++steps;
      u64 answer_child = 0;  // 0: invalid claim, v: stay, else: move
      if (!sc.valid(v) || (sc.is_leaf(v) && !sc.goal(v))) {
        answer_child = 0;  // always truthful off the path and at invalid leaves
      } else if (sc.is_leaf(v)) {
        answer_child = v;  // truthful at the valid (goal) leaf
      } else {
        const double u = uniform();
        if (u < cfg.honest)
          answer_child = sc.goal(v) ? v : sc.valid_child(v);
        else if (u < cfg.honest + forcing)
          answer_child = sc.valid_child(v);
        else if (u < cfg.honest + forcing + invalid_branch)
          answer_child = sc.valid_child(v) == 2 * v ? 2 * v + 1 : 2 * v;
        else
          answer_child = sc.goal(v) ? v : sc.valid_child(v);
      }
      if (answer_child == 0) {
        if (!stack.empty()) {
          v = stack.back();
          stack.pop_back();
          // The run cache becomes the trailing copies of the popped vertex.
          run = 0;
          for (auto it = stack.rbegin(); it != stack.rend() && *it == v; ++it) ++run;
        }
        continue;
      }
      if (answer_child == v) {
        const u64 new_run = (!stack.empty() && stack.back() == v) ? run + 1 : 1;
        stack.push_back(v);
        run = new_run;
        if (run >= out.threshold) {
          terminal = v;
          break;
        }
        continue;
      }
      stack.push_back(v);
      run = 0;
      v = answer_child;
    }
    total_steps += steps;
    if (terminal == 0) {
      ++out.capped_trials;
      continue;
    }
    if (terminal == sc.leaf) ++leaf_hits;
    if (sc.valid(terminal) && sc.goal(terminal)) ++goal_hits;
  }
  out.mean_steps = double(total_steps) / double(cfg.trials);
  out.leaf_goal_rate = double(leaf_hits) / double(cfg.trials);
  out.goal_terminal_rate = double(goal_hits) / double(cfg.trials);
  return out;
}

}  // namespace ngeo
