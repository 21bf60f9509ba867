// Randomized incremental trapezoidal decomposition of non-crossing segments.
// The history DAG stores every trapezoid ever created; destroyed trapezoids
// link to the at most four replacements that cover them. Endpoint location
// runs as a path-guided pushdown walk over the DAG; the walk along a new
// segment uses repetition-amplified above/below tests whose outcomes also
// decide the merge chain.
#pragma once

#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/exact_oracles.hpp"
#include "ngeo/noise.hpp"
#include "ngeo/walk.hpp"

namespace ngeo {

inline constexpr u32 kTrapNone = 0xffffffffu;

struct TrapNode {
  int top = kTrapTopSentinel;        // segment id or sentinel
  int bottom = kTrapBottomSentinel;  // segment id or sentinel
  Point2 leftp;
  Point2 rightp;
  bool leaf = true;
  int splitter = -1;  // segment whose insertion destroyed this trapezoid
  // Children by role: left/right slabs and the parts above/below the splitter.
  u32 child_left = kTrapNone, child_right = kTrapNone;
  u32 child_upper = kTrapNone, child_lower = kTrapNone;
  // Leaf neighbor links; a single neighbor occupies both slots of its side.
  u32 ul = kTrapNone, ll = kTrapNone, ur = kTrapNone, lr = kTrapNone;
};

struct TrapConfig {
  double c = 2.0;  // epsilon = n^-c per walk; step amplification target n^-(c+1)
  double p_e_max = 1.0 / 16.0;
  int max_retries = 3;
  bool instrumented = false;
};

class TrapezoidMap {
 public:
  // Runs the RIC over a random permutation drawn from ctx. Validates the
  // input exactly before introducing any noise.
  static TrapezoidMap build(const std::vector<Segment2>& segments, NoisyContext& ctx,
                            const TrapConfig& cfg, WalkStats* stats = nullptr);

  // Point location via a pushdown walk over the history DAG. q must be
  // strictly inside the box, off all segments and walls.
  u32 locate(Point2 q, NoisyContext& ctx, WalkStats* stats = nullptr) const;

  // Exact reference locator: scans the current leaves.
  u32 exact_locate(Point2 q) const;

  const TrapNode& node(u32 id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const { return leaf_count_; }
  u32 segment_count() const { return (u32)segs_.size(); }
  std::vector<u32> leaves() const;
  std::vector<TrapDescription> canonical_leaves() const;

  // Exact instrumented checks (rational arithmetic).
  void check_children_cover() const;
  void check_leaf_tiling() const;

  bool contains_exact(u32 id, Point2 q) const;

 private:
  TrapezoidMap(std::vector<Segment2> segs, const TrapConfig& cfg, double p);

  struct DagView;
  friend struct DagView;

  void insert_segment(u32 seg_id, NoisyContext& ctx, WalkStats* stats);
  void apply_split(u32 seg_id, const std::vector<u32>& seq, const std::vector<char>& above);
  void rewire(const std::vector<u32>& destroyed, const std::vector<u32>& created);
  u32 new_node(int top, int bottom, Point2 leftp, Point2 rightp);

  Sign top_vs_y(u32 id, Point2 q) const;     // top height minus q.y at q.x
  Sign bottom_vs_y(u32 id, Point2 q) const;  // bottom height minus q.y

  std::vector<Segment2> segs_;
  std::vector<TrapNode> nodes_;
  std::size_t leaf_count_ = 0;
  TrapConfig cfg_;
  RepetitionPlan plan_oracle_;  // per-primitive amplification inside the walk
  RepetitionPlan plan_step_;    // above/below outcomes of the segment walk
  double epsilon_ = 1e-6;
};

}  // namespace ngeo
