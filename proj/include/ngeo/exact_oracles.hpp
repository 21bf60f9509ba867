// Independent exact reference computations used to judge trial success.
// Every oracle here avoids the code paths of the noisy implementations it
// checks: gift wrapping for hulls, all-pairs scans for crossings and closest
// pairs, Prim over the complete graph for the EMST, and a direct geometric
// trapezoid query that never touches the history DAG.
#pragma once

#include <array>
#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/rational.hpp"

namespace ngeo {

// CCW hull starting at the lexicographically smallest vertex (gift wrapping).
std::vector<Point2> exact_hull_gift_wrap(const std::vector<Point2>& pts);

bool polygon_is_convex_ccw(const std::vector<Point2>& poly);
bool polygon_contains_all(const std::vector<Point2>& poly, const std::vector<Point2>& pts);

struct CrossingRecord {
  u32 s1, s2;  // segment indices, s1 < s2
  Rat x, y;
  friend bool operator==(const CrossingRecord& a, const CrossingRecord& b) {
    return a.s1 == b.s1 && a.s2 == b.s2;
  }
};

// All pairwise proper crossings in exact sweep order (x, then y).
std::vector<CrossingRecord> brute_force_crossings(const std::vector<Segment2>& segs);

// Index pair (i < j) of the unique closest pair.
std::pair<u32, u32> brute_force_closest_pair(const std::vector<Point2>& pts);

// Euclidean MST of the complete graph (Prim, O(n^2)); edges as index pairs.
std::vector<std::pair<u32, u32>> exact_complete_mst(const std::vector<Point2>& pts);
i128 edges_total_weight(const std::vector<Point2>& pts,
                        const std::vector<std::pair<u32, u32>>& edges);
bool edges_form_spanning_tree(u32 n, const std::vector<std::pair<u32, u32>>& edges);

// The trapezoid of the decomposition of `segs` containing q, computed
// directly from the raw segments. Sentinel ids: kTrapTop above everything,
// kTrapBottom below; box corners stand in for missing wall points.
inline constexpr int kTrapTopSentinel = -1;
inline constexpr int kTrapBottomSentinel = -2;

struct TrapDescription {
  int top = kTrapTopSentinel;
  int bottom = kTrapBottomSentinel;
  Point2 leftp;
  Point2 rightp;
  friend bool operator==(const TrapDescription&, const TrapDescription&) = default;
  friend bool operator<(const TrapDescription& a, const TrapDescription& b) {
    if (a.top != b.top) return a.top < b.top;
    if (a.bottom != b.bottom) return a.bottom < b.bottom;
    if (a.leftp.x != b.leftp.x) return a.leftp.x < b.leftp.x;
    if (a.leftp.y != b.leftp.y) return a.leftp.y < b.leftp.y;
    if (a.rightp.x != b.rightp.x) return a.rightp.x < b.rightp.x;
    return a.rightp.y < b.rightp.y;
  }
};

// Requires q strictly inside the bounding box, not on any segment and not on
// any vertical wall through an endpoint.
TrapDescription exact_trapezoid_at(const std::vector<Segment2>& segs, Point2 q);

// True when every triangle is CCW and no input point lies strictly inside
// any triangle's circumcircle.
bool delaunay_triangles_valid(const std::vector<Point2>& pts,
                              const std::vector<std::array<u32, 3>>& triangles);

}  // namespace ngeo
