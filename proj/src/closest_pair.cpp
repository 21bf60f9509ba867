#include "ngeo/closest_pair.hpp"

#include <cmath>

#include "ngeo/instance.hpp"
#include "ngeo/predicates.hpp"
#include "ngeo/rbtree.hpp"

namespace ngeo {

namespace {

// y-table order: by y, then x (exact); indices into the point array.
struct YCmp {
  const std::vector<Point2>* pts;
  Sign operator()(u32 a, u32 b) const {
    const Sign sy = compare_y((*pts)[a], (*pts)[b]);
    if (sy != Sign::zero) return sy;
    const Sign sx = compare_x((*pts)[a], (*pts)[b]);
    if (sx != Sign::zero) return sx;
    return a == b ? Sign::zero : (a < b ? Sign::negative : Sign::positive);
  }
};

struct XCmp {
  const std::vector<Point2>* pts;
  Sign operator()(u32 a, u32 b) const {
    const Sign s = compare_xy((*pts)[a], (*pts)[b]);
    if (s != Sign::zero) return s;
    return a == b ? Sign::zero : (a < b ? Sign::negative : Sign::positive);
  }
};

}  // namespace

std::pair<u32, u32> closest_pair(const std::vector<Point2>& points, NoisyContext& ctx,
                                 const ClosestPairConfig& cfg, WalkStats* stats) {
  if (points.size() < 2) throw TooFewPoints("closest pair needs at least two points");
  validate_unique_closest_pair(points);  // also rejects duplicate points
  const u32 n = (u32)points.size();
  if (n == 2) return {0, 1};

  const double epsilon = std::pow(double(n), -cfg.c);
  const auto tree_cfg = make_tree_config(ctx.p(), epsilon, cfg.p_e_max);
  const RepetitionPlan plan_amp = repetitions_for(ctx.p(), std::pow(double(n), -(cfg.c + 1.0)));

  std::vector<u32> order(n);
  for (u32 i = 0; i < n; ++i) order[i] = i;
  order = noisy_sort(order, XCmp{&points}, ctx, tree_cfg, stats);

  using Table = NoisyTree<u32, YCmp>;
  Table table(YCmp{&points});
  std::vector<Table::Handle> handle_of(n, Table::npos);

  i128 delta_sq = -1;  // unset until the first two points meet
  std::pair<u32, u32> best{0, 1};
  std::size_t first_active = 0;

  for (std::size_t i = 0; i < order.size(); ++i) {
    const u32 pi = order[i];
    const Point2 p = points[pi];
    if (delta_sq >= 0) {
      // Deactivate points too far left to matter, scanning the processed
      // prefix in its sorted order; removal itself is structural.
      while (first_active < i) {
        const u32 qi = order[first_active];
        const Point2 q = points[qi];
        const bool inactive = majority_vote(
            ctx,
            [&] {
              const i128 dx = i128(p.x) - q.x;
              return dx * dx > delta_sq;
            },
            plan_amp);
        if (!inactive) break;
        if (handle_of[qi] != Table::npos && table.is_live(handle_of[qi]))
          table.erase(handle_of[qi]);
        handle_of[qi] = Table::npos;
        ++first_active;
      }
    }
    const auto h = table.insert(pi, ctx, tree_cfg, stats);
    handle_of[pi] = h;
    // A fixed number of nearby table entries on each side; selection is
    // structural, only the distance comparisons are noisy.
    std::vector<u32> nearby;
    auto cursor = h;
    for (u32 k = 0; k < cfg.neighbor_span; ++k) {
      cursor = table.predecessor(cursor);
      if (cursor == Table::npos) break;
      nearby.push_back(table.key(cursor));
    }
    cursor = h;
    for (u32 k = 0; k < cfg.neighbor_span; ++k) {
      cursor = table.successor(cursor);
      if (cursor == Table::npos) break;
      nearby.push_back(table.key(cursor));
    }
    for (u32 qi : nearby) {
      const i128 d = squared_dist(p, points[qi]);
      if (delta_sq < 0) {
        delta_sq = d;
        best = {std::min(pi, qi), std::max(pi, qi)};
        continue;
      }
      const bool smaller = majority_vote(ctx, [&] { return d < delta_sq; }, plan_amp);
      if (smaller) {
        delta_sq = d;
        best = {std::min(pi, qi), std::max(pi, qi)};
      }
    }
  }
  return best;
}

}  // namespace ngeo
