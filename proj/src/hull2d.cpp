#include "ngeo/hull2d.hpp"

#include <cmath>

#include "ngeo/instance.hpp"
#include "ngeo/predicates.hpp"
#include "ngeo/rbtree.hpp"

namespace ngeo {

namespace {

struct LexCmp {
  const std::vector<Point2>* pts;
  Sign operator()(u32 a, u32 b) const {
    const Sign s = compare_xy((*pts)[a], (*pts)[b]);
    if (s != Sign::zero) return s;
    return a == b ? Sign::zero : (a < b ? Sign::negative : Sign::positive);
  }
};

}  // namespace

std::vector<Point2> convex_hull_2d(const std::vector<Point2>& points, NoisyContext& ctx,
                                   const HullConfig& cfg, WalkStats* stats) {
  if (points.size() < 3) throw TooFewPoints("hull needs at least three points");
  validate_points_general_position(points);
  const u32 n = (u32)points.size();
  const double epsilon = std::pow(double(n), -cfg.c);
  const auto tree_cfg = make_tree_config(ctx.p(), epsilon, cfg.p_e_max);
  const RepetitionPlan plan_orient = repetitions_for(ctx.p(), std::pow(double(n), -(cfg.c + 1.0)));

  std::vector<u32> order(n);
  for (u32 i = 0; i < n; ++i) order[i] = i;
  order = noisy_sort(order, LexCmp{&points}, ctx, tree_cfg, stats);

  auto ccw = [&](u32 a, u32 b, u32 c) {
    return majority_vote(
        ctx, [&] { return orient2d(points[a], points[b], points[c]) == Sign::positive; },
        plan_orient);
  };

  std::vector<u32> lower;
  for (u32 idx : order) {
    while (lower.size() >= 2 && !ccw(lower[lower.size() - 2], lower.back(), idx))
      lower.pop_back();
    lower.push_back(idx);
  }
  std::vector<u32> upper;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    while (upper.size() >= 2 && !ccw(upper[upper.size() - 2], upper.back(), *it))
      upper.pop_back();
    upper.push_back(*it);
  }
  std::vector<Point2> hull;
  for (std::size_t i = 0; i + 1 < lower.size(); ++i) hull.push_back(points[lower[i]]);
  for (std::size_t i = 0; i + 1 < upper.size(); ++i) hull.push_back(points[upper[i]]);
  return hull;
}

}  // namespace ngeo
