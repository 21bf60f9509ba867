// Path-guided pushdown random walk over a DAG with a noisy transition oracle.
//
// The walk keeps a stack holding an actual path of the DAG from the start to
// the current vertex. Each oracle consultation drives one of four cases:
// backtrack on "not on path", push-and-stay when the oracle names the current
// vertex, pop when it names a move but the stack top is the current vertex,
// and push-and-move otherwise. The walk terminates once one vertex
// accumulates a run of consecutive stack copies of length
// ceil(threshold_factor * log2(1/epsilon)).
#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/noise.hpp"

namespace ngeo {

using WalkVertex = u32;
inline constexpr WalkVertex kNoVertex = 0xffffffffu;

// Answer of one oracle consultation: whether the queried vertex is claimed to
// be on the search path and, if so, the claimed next vertex (the vertex
// itself means "stay"; anything else must be an outgoing neighbor).
struct Transition {
  bool on_path = false;
  WalkVertex next = kNoVertex;
};

struct WalkConfig {
  double epsilon = 1e-6;        // failure tolerance, callers typically use n^-c
  double p_e_max = 1.0 / 16.0;  // per-consultation oracle error bound, < 1/15
  double path_hint = 16.0;      // expected path-length bound L
  double budget_factor = 12.0;  // gamma: budget = ceil(gamma*(L + log2(1/eps)))
  double threshold_factor = 4.0;  // beta: threshold = ceil(beta*log2(1/eps))
  u64 budget_override = 0;        // nonzero replaces the computed budget
  int max_retries = 3;            // whole-walk retries on budget exhaustion
};

struct WalkStats {
  u64 consultations = 0;    // total oracle queries, including rejected ones
  u64 rejected = 0;         // answers naming a non-neighbor, re-queried
  u64 traversal_steps = 0;  // moves, pops and backtracks
  u64 stay_pushes = 0;      // push-and-stay steps (claimed next == current)
  u64 retries = 0;

  void merge(const WalkStats& o) {
    consultations += o.consultations;
    rejected += o.rejected;
    traversal_steps += o.traversal_steps;
    stay_pushes += o.stay_pushes;
    retries += o.retries;
  }
};

struct WalkEntry {
  WalkVertex vertex;
  u32 run;  // 1 if vertex differs from the entry below, else below.run + 1
};

struct WalkOutcome {
  WalkVertex terminal = kNoVertex;
  WalkStats stats;
  std::vector<WalkEntry> stack;  // stack contents at termination
};

inline u64 walk_threshold(const WalkConfig& cfg) {
  const double t = cfg.threshold_factor * std::log2(1.0 / cfg.epsilon);
  return t <= 1.0 ? 1 : (u64)std::ceil(t);
}

inline u64 walk_budget(const WalkConfig& cfg) {
  if (cfg.budget_override) return cfg.budget_override;
  const double b = cfg.budget_factor * (cfg.path_hint + std::log2(1.0 / cfg.epsilon));
  return b <= 1.0 ? 1 : (u64)std::ceil(b);
}

// Dag concept:
//   bool contains(WalkVertex) const
//   bool is_edge(WalkVertex from, WalkVertex to) const
//   std::size_t out_degree(WalkVertex) const
// Oracle concept: Transition operator()(WalkVertex)
template <class Dag, class Oracle>
WalkOutcome run_walk(const Dag& dag, Oracle&& oracle, WalkVertex start, const WalkConfig& cfg) {
  if (!(cfg.p_e_max < 1.0 / 15.0))
    throw StructuralError("walk: per-consultation error bound must be below 1/15");
  if (!dag.contains(start)) throw StructuralError("walk: start vertex not in dag");

  const u64 threshold = walk_threshold(cfg);
  const u64 budget = walk_budget(cfg);

  WalkOutcome out;
  std::vector<WalkEntry>& stack = out.stack;
  WalkVertex v = start;

  while (true) {
    if (out.stats.consultations >= budget) throw BudgetExhausted("walk: step budget exhausted");
    const Transition t = oracle(v);
    ++out.stats.consultations;

    if (t.on_path && t.next != v && !dag.is_edge(v, t.next)) {
      // Structural check, non-noisy: reject and re-query.
      ++out.stats.rejected;
      continue;
    }
    if (!t.on_path) {
      ++out.stats.traversal_steps;
      if (!stack.empty()) {
        v = stack.back().vertex;
        stack.pop_back();
      }
      // At the start vertex with an empty stack there is nothing to pop.
      continue;
    }
    if (t.next == v) {
      ++out.stats.stay_pushes;
      const u32 run = (!stack.empty() && stack.back().vertex == v) ? stack.back().run + 1 : 1;
      stack.push_back({v, run});
      if (run >= threshold) {
        out.terminal = v;
        return out;
      }
      continue;
    }
    if (!stack.empty() && stack.back().vertex == v) {
      // Evidence against the previous decision to stay here.
      ++out.stats.traversal_steps;
      stack.pop_back();
      continue;
    }
    ++out.stats.traversal_steps;
    stack.push_back({v, 1});
    v = t.next;
  }
}

// As run_walk but retries with fresh noise (the context keeps advancing) when
// the budget is exhausted, up to cfg.max_retries times.
template <class Dag, class Oracle>
WalkOutcome run_walk_retrying(const Dag& dag, Oracle&& oracle, WalkVertex start,
                              const WalkConfig& cfg) {
  WalkStats accum;
  for (int attempt = 0;; ++attempt) {
    try {
      WalkOutcome out = run_walk(dag, oracle, start, cfg);
      accum.merge(out.stats);
      out.stats = accum;
      return out;
    } catch (const BudgetExhausted&) {
      if (attempt >= cfg.max_retries) throw;
      accum.retries += 1;
    }
  }
}

// Tree variant: start must be the root, and the stack at termination is also
// returned as the root-to-terminal path with repetitions collapsed. A
// height-0 tree violates the s != t assumption and is rejected.
template <class Dag, class Oracle>
WalkOutcome run_walk_on_tree(const Dag& dag, Oracle&& oracle, WalkVertex root,
                             const WalkConfig& cfg) {
  if (!dag.contains(root)) throw StructuralError("tree walk: root not in tree");
  if (dag.out_degree(root) == 0)
    throw StructuralError("tree walk: height-0 tree has start == target");
  return run_walk(dag, oracle, root, cfg);
}

// Stack contents with consecutive repetitions collapsed, plus the terminal.
inline std::vector<WalkVertex> collapsed_path(const WalkOutcome& out) {
  std::vector<WalkVertex> path;
  for (const WalkEntry& e : out.stack)
    if (path.empty() || path.back() != e.vertex) path.push_back(e.vertex);
  if (out.terminal != kNoVertex && (path.empty() || path.back() != out.terminal))
    path.push_back(out.terminal);
  return path;
}

// Wraps an oracle whose per-consultation error bound exceeds cfg.p_e_max:
// repeats each consultation a fixed odd number of times and returns the
// plurality transition, bringing the error below the bound.
template <class Oracle>
class AmplifiedOracle {
 public:
  AmplifiedOracle(Oracle oracle, double oracle_error, double target)
      : oracle_(std::move(oracle)) {
    if (!(oracle_error < 0.5)) throw StructuralError("oracle error must be below 1/2");
    plan_ = oracle_error <= target ? RepetitionPlan{1, oracle_error}
                                   : repetitions_for(oracle_error, target);
  }

  Transition operator()(WalkVertex v) {
    if (plan_.reps == 1) return oracle_(v);
    tally_.clear();
    Transition best{};
    int best_count = 0;
    for (int i = 0; i < plan_.reps; ++i) {
      const Transition t = oracle_(v);
      const u64 key = (t.on_path ? (u64(1) << 63) : 0) | u64(t.next);
      const int c = ++tally_[key];
      if (c > best_count) {
        best_count = c;
        best = t;
      }
    }
    return best;
  }

  int reps() const { return plan_.reps; }

 private:
  Oracle oracle_;
  RepetitionPlan plan_;
  std::unordered_map<u64, int> tally_;
};

}  // namespace ngeo
