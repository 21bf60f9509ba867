#include "ngeo/sweep.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "ngeo/instance.hpp"
#include "ngeo/predicates.hpp"
#include "ngeo/rbtree.hpp"

namespace ngeo {

namespace {

enum EventKind : int { kLeft = 0, kRight = 1, kCrossing = 2 };

struct Event {
  Rat x, y;
  int kind = kLeft;
  u32 s1 = 0, s2 = 0;
};

// Exact total order: x, then y, then kind, then segment ids.
struct EventCmp {
  Sign operator()(const Event& a, const Event& b) const {
    Sign s = cmp(a.x, b.x);
    if (s != Sign::zero) return s;
    s = cmp(a.y, b.y);
    if (s != Sign::zero) return s;
    if (a.kind != b.kind) return a.kind < b.kind ? Sign::negative : Sign::positive;
    if (a.s1 != b.s1) return a.s1 < b.s1 ? Sign::negative : Sign::positive;
    if (a.s2 != b.s2) return a.s2 < b.s2 ? Sign::negative : Sign::positive;
    return Sign::zero;
  }
};

// Vertical order of active segments at the shared sweep abscissa, exact by
// cross-multiplication; ties (possible only at a common point) break by
// slope, then id, to stay a total order.
struct StatusCmp {
  const std::vector<Segment2>* segs;
  const Rat* now_x;
  Sign operator()(u32 a, u32 b) const {
    if (a == b) return Sign::zero;
    const Sign h = height_diff_at((*segs)[a], (*segs)[b], *now_x);
    if (h != Sign::zero) return h;
    const Segment2 &sa = (*segs)[a], &sb = (*segs)[b];
    const Sign sl = sign_of(i128(sa.b.y - sa.a.y) * (sb.b.x - sb.a.x) -
                            i128(sb.b.y - sb.a.y) * (sa.b.x - sa.a.x));
    if (sl != Sign::zero) return sl;
    return a < b ? Sign::negative : Sign::positive;
  }
};

u64 pair_key(u32 i, u32 j) { return (u64(std::min(i, j)) << 32) | u64(std::max(i, j)); }

i64 gap_key(int below, int above) { return (i64(below + 2) << 32) | i64(u32(above + 2)); }

}  // namespace

SweepResult intersect_segments(const std::vector<Segment2>& segments, NoisyContext& ctx,
                               const SweepConfig& cfg, bool emit_trapezoids) {
  validate_crossing_instance(segments);
  const u32 n = (u32)segments.size();
  const double n_eff = std::max<double>(2.0, double(n));
  const double epsilon = std::pow(n_eff, -cfg.c);
  const auto tree_cfg = make_tree_config(ctx.p(), epsilon, cfg.p_e_max);
  const RepetitionPlan plan_cross = repetitions_for(ctx.p(), std::pow(n_eff, -(cfg.c + 1.0)));

  SweepResult out;
  Rat now_x = Rat::of(-kBoxBound);

  using EventTree = NoisyTree<Event, EventCmp>;
  using StatusTree = NoisyTree<u32, StatusCmp>;
  EventTree events;
  StatusTree status(StatusCmp{&segments, &now_x});
  std::vector<StatusTree::Handle> handle_of(n, StatusTree::npos);
  std::unordered_set<u64> scheduled;

  for (u32 i = 0; i < n; ++i) {
    events.insert({Rat::of(segments[i].a.x), Rat::of(segments[i].a.y), kLeft, i, i}, ctx,
                  tree_cfg, &out.stats);
    events.insert({Rat::of(segments[i].b.x), Rat::of(segments[i].b.y), kRight, i, i}, ctx,
                  tree_cfg, &out.stats);
  }

  // Vertical-decomposition bookkeeping: a gap opens when two entries become
  // vertically adjacent and closes on any adjacency change. Purely
  // structural, no extra noisy calls.
  std::unordered_map<i64, Rat> open_gap;
  auto open = [&](int below, int above) {
    if (emit_trapezoids) open_gap[gap_key(below, above)] = now_x;
  };
  auto close = [&](int below, int above) {
    if (!emit_trapezoids) return;
    const auto it = open_gap.find(gap_key(below, above));
    if (it == open_gap.end()) return;
    if (cmp(it->second, now_x) == Sign::negative)  // skip zero-width cells
      out.trapezoids.push_back({below, above, it->second, now_x});
    open_gap.erase(it);
  };
  auto seg_of = [&](StatusTree::Handle h) {
    return h == StatusTree::npos ? kTrapBottomSentinel : (int)status.key(h);
  };
  open(kTrapBottomSentinel, kTrapTopSentinel);

  auto try_schedule = [&](StatusTree::Handle ha, StatusTree::Handle hb) {
    if (ha == StatusTree::npos || hb == StatusTree::npos) return;
    const u32 i = status.key(ha), j = status.key(hb);
    if (scheduled.count(pair_key(i, j))) return;
    const bool crosses_ahead = majority_vote(
        ctx,
        [&] {
          if (!properly_cross(segments[i], segments[j])) return false;
          const auto pt = line_crossing(segments[i], segments[j]);
          return pt && cmp(pt->first, now_x) == Sign::positive;
        },
        plan_cross);
    if (!crosses_ahead) return;
    const auto pt = line_crossing(segments[i], segments[j]);
    if (!pt) return;  // parallel supporting lines; a lie cannot make an event
    scheduled.insert(pair_key(i, j));
    events.insert({pt->first, pt->second, kCrossing, std::min(i, j), std::max(i, j)}, ctx,
                  tree_cfg, &out.stats);
  };

  while (!events.empty()) {
    const Event ev = events.extract_min();
    now_x = ev.x;
    if (ev.kind == kLeft) {
      const auto h = status.insert(ev.s1, ctx, tree_cfg, &out.stats);
      handle_of[ev.s1] = h;
      const auto up = status.successor(h);
      const auto dn = status.predecessor(h);
      close(seg_of(dn), up == StatusTree::npos ? kTrapTopSentinel : (int)status.key(up));
      open(seg_of(dn), (int)ev.s1);
      open((int)ev.s1, up == StatusTree::npos ? kTrapTopSentinel : (int)status.key(up));
      try_schedule(h, up);
      try_schedule(dn, h);
    } else if (ev.kind == kRight) {
      const auto h = handle_of[ev.s1];
      if (h == StatusTree::npos || !status.is_live(h) || status.key(h) != ev.s1) continue;
      const auto up = status.successor(h);
      const auto dn = status.predecessor(h);
      const int up_seg = up == StatusTree::npos ? kTrapTopSentinel : (int)status.key(up);
      close(seg_of(dn), (int)ev.s1);
      close((int)ev.s1, up_seg);
      open(seg_of(dn), up_seg);
      status.erase(h);
      handle_of[ev.s1] = StatusTree::npos;
      try_schedule(dn, up);
    } else {
      out.crossings.push_back({ev.s1, ev.s2, ev.x, ev.y});
      const auto h1 = handle_of[ev.s1];
      const auto h2 = handle_of[ev.s2];
      if (h1 == StatusTree::npos || h2 == StatusTree::npos) continue;
      if (!status.is_live(h1) || !status.is_live(h2)) continue;
      StatusTree::Handle lo, hi;
      if (status.successor(h1) == h2) {
        lo = h1;
        hi = h2;
      } else if (status.successor(h2) == h1) {
        lo = h2;
        hi = h1;
      } else {
        continue;  // not adjacent: an earlier noisy slip; keep the report only
      }
      const u32 lo_seg = status.key(lo), hi_seg = status.key(hi);
      const auto below = status.predecessor(lo);
      const auto above = status.successor(hi);
      const int below_seg = seg_of(below);
      const int above_seg = above == StatusTree::npos ? kTrapTopSentinel : (int)status.key(above);
      close(below_seg, (int)lo_seg);
      close((int)lo_seg, (int)hi_seg);
      close((int)hi_seg, above_seg);
      status.swap_payloads(lo, hi);
      handle_of[lo_seg] = hi;
      handle_of[hi_seg] = lo;
      open(below_seg, (int)hi_seg);
      open((int)hi_seg, (int)lo_seg);
      open((int)lo_seg, above_seg);
      try_schedule(below, lo);
      try_schedule(hi, above);
    }
  }
  if (emit_trapezoids) {
    now_x = Rat::of(kBoxBound);
    std::vector<i64> keys;
    for (const auto& [k, x] : open_gap) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (i64 k : keys) {
      const Rat x0 = open_gap[k];
      out.trapezoids.push_back({int((k >> 32) - 2), int(u32(k & 0xffffffff)) - 2, x0, now_x});
    }
  }
  return out;
}

}  // namespace ngeo
