// Synthetic DAGs and transition oracles used to exercise the walk engine
// directly: directed paths, a diamond where lies can leave and rejoin the
// path, and complete binary trees.
#pragma once

#include <vector>

#include "ngeo/noise.hpp"
#include "ngeo/walk.hpp"

namespace ngeo {

// Vertices 0..length-1 with edges i -> i+1.
struct PathDag {
  u32 length;
  bool contains(WalkVertex v) const { return v < length; }
  bool is_edge(WalkVertex a, WalkVertex b) const { return b == a + 1 && b < length; }
  std::size_t out_degree(WalkVertex v) const { return v + 1 < length ? 1 : 0; }
};

// 0 -> {1, 2}, 1 -> 3, 2 -> 3. The intended path is 0 -> 1 -> 3.
struct DiamondDag {
  bool contains(WalkVertex v) const { return v < 4; }
  bool is_edge(WalkVertex a, WalkVertex b) const {
    return (a == 0 && (b == 1 || b == 2)) || ((a == 1 || a == 2) && b == 3);
  }
  std::size_t out_degree(WalkVertex v) const { return v == 0 ? 2 : (v < 3 ? 1 : 0); }
};

// Heap-indexed complete binary tree: root 1, children 2v and 2v+1,
// leaves at depth `height`.
struct CompleteTreeDag {
  u32 height;
  u32 node_count() const { return (u32(1) << (height + 1)) - 1; }
  bool contains(WalkVertex v) const { return v >= 1 && v <= node_count(); }
  bool is_edge(WalkVertex a, WalkVertex b) const {
    return contains(a) && contains(b) && (b == 2 * a || b == 2 * a + 1);
  }
  std::size_t out_degree(WalkVertex v) const { return contains(2 * v) ? 2 : 0; }
  u32 depth(WalkVertex v) const {
    u32 d = 0;
    while (v > 1) {
      v >>= 1;
      ++d;
    }
    return d;
  }
};

// Truthful oracle for a PathDag whose target is the last vertex.
struct HonestPathOracle {
  u32 length;
  Transition operator()(WalkVertex v) const {
    if (v >= length) return {false, kNoVertex};
    return {true, v + 1 < length ? v + 1 : v};
  }
};

enum class LieStyle {
  deny_path,   // claim "not on path"
  claim_stay,  // claim the walk should stay put
  mixed,       // alternate between damaging lies per call
};

// Lies with probability exactly p_e; the lie flavor is chosen to be damaging:
// at the target it denies the path (undoing termination progress), elsewhere
// it denies or fakes a stay.
class AdversarialPathOracle {
 public:
  AdversarialPathOracle(u32 length, double p_e, u64 seed, u64 stream,
                        LieStyle style = LieStyle::mixed)
      : length_(length), p_e_(p_e), style_(style), rng_(mix_seed(seed, stream)) {}

  Transition operator()(WalkVertex v) {
    const bool lie = uniform01() < p_e_;
    const bool at_target = v + 1 >= length_;
    if (!lie) return {true, at_target ? v : v + 1};
    if (at_target) return {false, kNoVertex};
    switch (style_) {
      case LieStyle::deny_path:
        return {false, kNoVertex};
      case LieStyle::claim_stay:
        return {true, v};
      case LieStyle::mixed:
      default:
        return (flip_ = !flip_) ? Transition{false, kNoVertex} : Transition{true, v};
    }
  }

 private:
  double uniform01() { return double(rng_() >> 11) * 0x1.0p-53; }
  u32 length_;
  double p_e_;
  LieStyle style_;
  std::mt19937_64 rng_;
  bool flip_ = false;
};

// Oracle over the diamond DAG for path 0 -> 1 -> 3. A lie at 0 may name the
// off-path vertex 2, from which the walk can rejoin the target.
class DiamondOracle {
 public:
  DiamondOracle(double p_e, u64 seed, u64 stream) : p_e_(p_e), rng_(mix_seed(seed, stream)) {}

  Transition operator()(WalkVertex v) {
    const bool lie = double(rng_() >> 11) * 0x1.0p-53 < p_e_;
    switch (v) {
      case 0:
        return lie ? Transition{true, 2} : Transition{true, 1};
      case 1:
        return lie ? Transition{false, kNoVertex} : Transition{true, 3};
      case 2:
        return lie ? Transition{true, 3} : Transition{false, kNoVertex};
      default:
        return lie ? Transition{false, kNoVertex} : Transition{true, 3};
    }
  }

 private:
  double p_e_;
  std::mt19937_64 rng_;
};

// Oracle guiding a complete-tree walk towards a target leaf; lies uniformly
// pick one of the wrong claims.
class TreeSearchOracle {
 public:
  TreeSearchOracle(const CompleteTreeDag& tree, WalkVertex target, double p_e, u64 seed,
                   u64 stream)
      : tree_(tree), target_(target), p_e_(p_e), rng_(mix_seed(seed, stream)) {}

  Transition operator()(WalkVertex v) {
    const bool on_path = is_ancestor_or_self(v, target_);
    const bool lie = double(rng_() >> 11) * 0x1.0p-53 < p_e_;
    if (!lie) {
      if (!on_path) return {false, kNoVertex};
      return {true, v == target_ ? v : child_towards(v, target_)};
    }
    // Wrong answers: deny the path, claim it wrongly, or take a wrong turn.
    if (!on_path) {
      const bool has_children = tree_.out_degree(v) > 0;
      const u64 r = rng_() % (has_children ? 3 : 1);
      if (r == 0 || !has_children) return {true, v};
      return {true, r == 1 ? 2 * v : 2 * v + 1};
    }
    if (v == target_) {
      if (tree_.out_degree(v) == 0 || (rng_() & 1)) return {false, kNoVertex};
      return {true, (rng_() & 1) ? 2 * v : 2 * v + 1};
    }
    const WalkVertex good = child_towards(v, target_);
    const u64 r = rng_() % 3;
    if (r == 0) return {false, kNoVertex};
    if (r == 1) return {true, v};
    return {true, good == 2 * v ? 2 * v + 1 : 2 * v};
  }

  static bool is_ancestor_or_self(WalkVertex v, WalkVertex t) {
    while (t >= v) {
      if (t == v) return true;
      t >>= 1;
    }
    return false;
  }

  static WalkVertex child_towards(WalkVertex v, WalkVertex t) {
    while (t > 2 * v + 1) t >>= 1;
    return t;
  }

 private:
  CompleteTreeDag tree_;
  WalkVertex target_;
  double p_e_;
  std::mt19937_64 rng_;
};

// Exact root-to-target path in the heap-indexed complete tree.
inline std::vector<WalkVertex> tree_root_path(WalkVertex target) {
  std::vector<WalkVertex> path;
  for (WalkVertex v = target; v >= 1; v >>= 1) path.push_back(v);
  std::vector<WalkVertex> rev(path.rbegin(), path.rend());
  return rev;
}

}  // namespace ngeo
