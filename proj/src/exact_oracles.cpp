#include "ngeo/exact_oracles.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "ngeo/predicates.hpp"

namespace ngeo {

std::vector<Point2> exact_hull_gift_wrap(const std::vector<Point2>& pts) {
  if (pts.size() < 3) throw TooFewPoints("hull needs at least three points");
  std::size_t start = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (compare_xy(pts[i], pts[start]) == Sign::negative) start = i;
  std::vector<Point2> hull;
  std::size_t cur = start;
  do {
    hull.push_back(pts[cur]);
    std::size_t next = (cur + 1) % pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == cur) continue;
      const Sign o = orient2d(pts[cur], pts[next], pts[i]);
      if (o == Sign::negative) next = i;  // i is further clockwise, wrap to it
    }
    cur = next;
    if (hull.size() > pts.size()) throw Error("gift wrap failed to close");
  } while (cur != start);
  return hull;
}

bool polygon_is_convex_ccw(const std::vector<Point2>& poly) {
  if (poly.size() < 3) return false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (orient2d(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) != Sign::positive) return false;
  return true;
}

bool polygon_contains_all(const std::vector<Point2>& poly, const std::vector<Point2>& pts) {
  const std::size_t n = poly.size();
  for (const Point2& p : pts) {
    for (std::size_t i = 0; i < n; ++i)
      if (orient2d(poly[i], poly[(i + 1) % n], p) == Sign::negative) return false;
  }
  return true;
}

std::vector<CrossingRecord> brute_force_crossings(const std::vector<Segment2>& segs) {
  std::vector<CrossingRecord> out;
  for (u32 i = 0; i < segs.size(); ++i)
    for (u32 j = i + 1; j < segs.size(); ++j)
      if (properly_cross(segs[i], segs[j])) {
        const auto pt = line_crossing(segs[i], segs[j]);
        if (!pt) throw Error("crossing segments with parallel lines");
        out.push_back({i, j, pt->first, pt->second});
      }
  std::sort(out.begin(), out.end(), [](const CrossingRecord& a, const CrossingRecord& b) {
    const Sign sx = cmp(a.x, b.x);
    if (sx != Sign::zero) return sx == Sign::negative;
    const Sign sy = cmp(a.y, b.y);
    if (sy != Sign::zero) return sy == Sign::negative;
    return std::make_pair(a.s1, a.s2) < std::make_pair(b.s1, b.s2);
  });
  return out;
}

std::pair<u32, u32> brute_force_closest_pair(const std::vector<Point2>& pts) {
  if (pts.size() < 2) throw TooFewPoints("closest pair needs two points");
  u32 bi = 0, bj = 1;
  i128 best = squared_dist(pts[0], pts[1]);
  for (u32 i = 0; i < pts.size(); ++i)
    for (u32 j = i + 1; j < pts.size(); ++j) {
      const i128 d = squared_dist(pts[i], pts[j]);
      if (d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  return {bi, bj};
}

std::vector<std::pair<u32, u32>> exact_complete_mst(const std::vector<Point2>& pts) {
  const u32 n = (u32)pts.size();
  std::vector<std::pair<u32, u32>> edges;
  if (n < 2) return edges;
  std::vector<char> in_tree(n, 0);
  std::vector<i128> best(n);
  std::vector<u32> link(n, 0);
  in_tree[0] = 1;
  for (u32 i = 1; i < n; ++i) best[i] = squared_dist(pts[0], pts[i]);
  for (u32 round = 1; round < n; ++round) {
    u32 pick = n;
    for (u32 i = 0; i < n; ++i)
      if (!in_tree[i] && (pick == n || best[i] < best[pick])) pick = i;
    in_tree[pick] = 1;
    edges.push_back({std::min(pick, link[pick]), std::max(pick, link[pick])});
    for (u32 i = 0; i < n; ++i)
      if (!in_tree[i]) {
        const i128 d = squared_dist(pts[pick], pts[i]);
        if (d < best[i]) {
          best[i] = d;
          link[i] = pick;
        }
      }
  }
  return edges;
}

i128 edges_total_weight(const std::vector<Point2>& pts,
                        const std::vector<std::pair<u32, u32>>& edges) {
  i128 total = 0;
  for (const auto& [a, b] : edges) total += squared_dist(pts[a], pts[b]);
  return total;
}

bool edges_form_spanning_tree(u32 n, const std::vector<std::pair<u32, u32>>& edges) {
  if (n == 0) return edges.empty();
  if (edges.size() != n - 1) return false;
  std::vector<u32> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](u32 v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) return false;
    const u32 ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

TrapDescription exact_trapezoid_at(const std::vector<Segment2>& segs, Point2 q) {
  TrapDescription out;
  // Top: the spanning segment strictly above q with the smallest height;
  // bottom symmetric.
  int top = kTrapTopSentinel, bottom = kTrapBottomSentinel;
  for (u32 i = 0; i < segs.size(); ++i) {
    const Segment2& s = segs[i];
    if (!(s.a.x < q.x && q.x < s.b.x)) continue;
    const Sign side = height_vs_y_at(s, q.x, q.y);
    if (side == Sign::zero) throw GeneralPositionViolation("query point on a segment");
    if (side == Sign::positive) {  // segment above q
      if (top == kTrapTopSentinel || height_diff_at_int(s, segs[top], q.x) == Sign::negative)
        top = (int)i;
    } else {
      if (bottom == kTrapBottomSentinel ||
          height_diff_at_int(s, segs[bottom], q.x) == Sign::positive)
        bottom = (int)i;
    }
  }
  out.top = top;
  out.bottom = bottom;

  // A segment endpoint e cuts the band when it lies strictly between the
  // band's bottom and top at e.x; the nearest cuts on each side, or the
  // endpoints of the band's own segments, define the walls.
  auto in_band = [&](Point2 e) {
    if (top != kTrapTopSentinel) {
      if (!(segs[top].a.x < e.x && e.x < segs[top].b.x)) return false;
      if (height_vs_y_at(segs[top], e.x, e.y) != Sign::positive) return false;
    }
    if (bottom != kTrapBottomSentinel) {
      if (!(segs[bottom].a.x < e.x && e.x < segs[bottom].b.x)) return false;
      if (height_vs_y_at(segs[bottom], e.x, e.y) != Sign::negative) return false;
    }
    return true;
  };

  Point2 leftp{-kBoxBound, -kBoxBound};
  Point2 rightp{kBoxBound, kBoxBound};
  if (top != kTrapTopSentinel && segs[top].a.x > leftp.x) leftp = segs[top].a;
  if (bottom != kTrapBottomSentinel && segs[bottom].a.x > leftp.x) leftp = segs[bottom].a;
  if (top != kTrapTopSentinel && segs[top].b.x < rightp.x) rightp = segs[top].b;
  if (bottom != kTrapBottomSentinel && segs[bottom].b.x < rightp.x) rightp = segs[bottom].b;
  for (const Segment2& s : segs)
    for (const Point2& e : {s.a, s.b}) {
      if (e.x == q.x) throw GeneralPositionViolation("query point on a vertical wall");
      if (e.x < q.x) {
        if (e.x > leftp.x && in_band(e)) leftp = e;
      } else {
        if (e.x < rightp.x && in_band(e)) rightp = e;
      }
    }
  out.leftp = leftp;
  out.rightp = rightp;
  return out;
}

bool delaunay_triangles_valid(const std::vector<Point2>& pts,
                              const std::vector<std::array<u32, 3>>& triangles) {
  for (const auto& t : triangles) {
    const Point2 a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
    Point2 v0 = a, v1 = b, v2 = c;
    const Sign o = orient2d(v0, v1, v2);
    if (o == Sign::zero) return false;
    if (o == Sign::negative) std::swap(v1, v2);
    for (u32 i = 0; i < pts.size(); ++i) {
      if (i == t[0] || i == t[1] || i == t[2]) continue;
      if (in_circle(v0, v1, v2, pts[i]) == Sign::positive) return false;
    }
  }
  return true;
}

}  // namespace ngeo
