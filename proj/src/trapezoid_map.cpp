#include "ngeo/trapezoid_map.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cmath>

#include "ngeo/instance.hpp"
#include "ngeo/predicates.hpp"
#include "ngeo/rational.hpp"

namespace ngeo {

namespace {

using big = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

}  // namespace

TrapezoidMap::TrapezoidMap(std::vector<Segment2> segs, const TrapConfig& cfg, double p)
    : segs_(std::move(segs)), cfg_(cfg) {
  const double n_eff = std::max<double>(2.0, double(segs_.size()));
  epsilon_ = std::pow(n_eff, -cfg.c);
  // Seven primitive tests per consultation: four on-path, up to three to
  // select a child.
  plan_oracle_ = repetitions_for(p, cfg.p_e_max / 7.0);
  plan_step_ = repetitions_for(p, std::pow(n_eff, -(cfg.c + 1.0)));
  TrapNode root;
  root.leftp = {-kBoxBound, -kBoxBound};
  root.rightp = {kBoxBound, kBoxBound};
  nodes_.push_back(root);
  leaf_count_ = 1;
}

u32 TrapezoidMap::new_node(int top, int bottom, Point2 leftp, Point2 rightp) {
  TrapNode nd;
  nd.top = top;
  nd.bottom = bottom;
  nd.leftp = leftp;
  nd.rightp = rightp;
  nodes_.push_back(nd);
  ++leaf_count_;
  return (u32)nodes_.size() - 1;
}

Sign TrapezoidMap::top_vs_y(u32 id, Point2 q) const {
  const TrapNode& nd = nodes_[id];
  if (nd.top == kTrapTopSentinel) return sign_of(i128(kBoxBound) - q.y);
  return height_vs_y_at(segs_[nd.top], q.x, q.y);
}

Sign TrapezoidMap::bottom_vs_y(u32 id, Point2 q) const {
  const TrapNode& nd = nodes_[id];
  if (nd.bottom == kTrapBottomSentinel) return sign_of(i128(-kBoxBound) - q.y);
  return height_vs_y_at(segs_[nd.bottom], q.x, q.y);
}

bool TrapezoidMap::contains_exact(u32 id, Point2 q) const {
  const TrapNode& nd = nodes_[id];
  return nd.leftp.x < q.x && q.x < nd.rightp.x && top_vs_y(id, q) == Sign::positive &&
         bottom_vs_y(id, q) == Sign::negative;
}

std::vector<u32> TrapezoidMap::leaves() const {
  std::vector<u32> out;
  for (u32 i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].leaf) out.push_back(i);
  return out;
}

std::vector<TrapDescription> TrapezoidMap::canonical_leaves() const {
  std::vector<TrapDescription> out;
  for (const TrapNode& nd : nodes_)
    if (nd.leaf) out.push_back({nd.top, nd.bottom, nd.leftp, nd.rightp});
  std::sort(out.begin(), out.end());
  return out;
}

u32 TrapezoidMap::exact_locate(Point2 q) const {
  u32 found = kTrapNone;
  for (u32 i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].leaf && contains_exact(i, q)) {
      if (found != kTrapNone) throw StructuralError("leaves overlap at query point");
      found = i;
    }
  if (found == kTrapNone) throw StructuralError("no leaf contains the query point");
  return found;
}

struct TrapezoidMap::DagView {
  const TrapezoidMap* m;
  bool contains(WalkVertex v) const { return v < m->nodes_.size(); }
  bool is_edge(WalkVertex a, WalkVertex b) const {
    const TrapNode& nd = m->nodes_[a];
    return b != kTrapNone &&
           (nd.child_left == b || nd.child_right == b || nd.child_upper == b ||
            nd.child_lower == b);
  }
  std::size_t out_degree(WalkVertex v) const {
    const TrapNode& nd = m->nodes_[v];
    return (nd.child_left != kTrapNone) + (nd.child_right != kTrapNone) +
           (nd.child_upper != kTrapNone) + (nd.child_lower != kTrapNone);
  }
};

u32 TrapezoidMap::locate(Point2 q, NoisyContext& ctx, WalkStats* stats) const {
  if (!(q.x > -kBoxBound && q.x < kBoxBound && q.y > -kBoxBound && q.y < kBoxBound))
    throw GeneralPositionViolation("query point outside the bounding box");
  WalkConfig wc;
  wc.epsilon = epsilon_;
  wc.p_e_max = cfg_.p_e_max;
  wc.path_hint = 4.0 * std::log2(double(nodes_.size()) + 2.0) + 8.0;
  wc.max_retries = cfg_.max_retries;

  auto amp = [&](auto&& pred) { return majority_vote(ctx, pred, plan_oracle_); };
  auto oracle = [&](WalkVertex v) -> Transition {
    const TrapNode& nd = nodes_[v];
    // On-path: q inside this trapezoid. Box sentinels hold exactly.
    bool inside = amp([&] { return q.x > nd.leftp.x; }) && amp([&] { return q.x < nd.rightp.x; });
    if (inside && nd.top != kTrapTopSentinel)
      inside = amp([&] { return above_segment(q, segs_[nd.top]) == Sign::negative; });
    if (inside && nd.bottom != kTrapBottomSentinel)
      inside = amp([&] { return above_segment(q, segs_[nd.bottom]) == Sign::positive; });
    if (!inside) return {false, kNoVertex};
    if (nd.leaf) return {true, v};
    const Segment2& s = segs_[nd.splitter];
    if (nd.child_left != kTrapNone && amp([&] { return q.x < s.a.x; })) return {true, nd.child_left};
    if (nd.child_right != kTrapNone && amp([&] { return q.x > s.b.x; })) return {true, nd.child_right};
    if (amp([&] { return above_segment(q, s) == Sign::positive; })) return {true, nd.child_upper};
    return {true, nd.child_lower};
  };

  WalkStats accum;
  for (int attempt = 0;; ++attempt) {
    try {
      WalkOutcome out = run_walk(DagView{this}, oracle, 0, wc);
      accum.merge(out.stats);
      if (nodes_[out.terminal].leaf) {
        if (stats) stats->merge(accum);
        return out.terminal;
      }
      // Terminated on a destroyed trapezoid: structurally detectable failure.
      if (attempt >= wc.max_retries) throw BudgetExhausted("locate: walk stuck on inner node");
      accum.retries++;
    } catch (const BudgetExhausted&) {
      if (attempt >= wc.max_retries) {
        if (stats) stats->merge(accum);
        throw;
      }
      accum.retries++;
    }
  }
}

TrapezoidMap TrapezoidMap::build(const std::vector<Segment2>& segments, NoisyContext& ctx,
                                 const TrapConfig& cfg, WalkStats* stats) {
  validate_noncrossing_segments(segments);
  TrapezoidMap map(segments, cfg, ctx.p());
  const auto perm = random_permutation((u32)segments.size(), ctx);
  for (u32 id : perm) {
    map.insert_segment(id, ctx, stats);
    if (cfg.instrumented) map.check_children_cover();
  }
  if (cfg.instrumented) map.check_leaf_tiling();
  return map;
}

void TrapezoidMap::insert_segment(u32 seg_id, NoisyContext& ctx, WalkStats* stats) {
  const Segment2& s = segs_[seg_id];
  for (int attempt = 0;; ++attempt) {
    const u32 dp = locate(s.a, ctx, stats);
    const u32 dq = locate(s.b, ctx, stats);
    std::vector<u32> seq{dp};
    std::vector<char> above;
    bool ok = true;
    u32 cur = dp;
    std::size_t guard = 0;
    while (cur != dq) {
      if (++guard > leaf_count_ + 2) {
        ok = false;
        break;
      }
      const Point2 w = nodes_[cur].rightp;
      const bool w_above = majority_vote(
          ctx, [&] { return above_segment(w, s) == Sign::positive; }, plan_step_);
      // The defining point of the right wall lies above the new segment, so
      // the segment leaves through the lower-right neighbor.
      const u32 nxt = w_above ? nodes_[cur].lr : nodes_[cur].ur;
      if (nxt == kTrapNone) {
        ok = false;
        break;
      }
      above.push_back(w_above ? 1 : 0);
      seq.push_back(nxt);
      cur = nxt;
    }
    if (ok) {
      apply_split(seg_id, seq, above);
      return;
    }
    if (attempt >= cfg_.max_retries)
      throw BudgetExhausted("segment insertion: walk failed to reach the right endpoint");
    if (stats) stats->retries++;
  }
}

void TrapezoidMap::apply_split(u32 seg_id, const std::vector<u32>& seq,
                               const std::vector<char>& above) {
  const Segment2& s = segs_[seg_id];
  const Point2 p = s.a, q = s.b;
  std::vector<u32> created;

  if (seq.size() == 1) {
    const u32 d = seq[0];
    const TrapNode nd = nodes_[d];
    const u32 a = new_node(nd.top, nd.bottom, nd.leftp, p);
    const u32 b = new_node(nd.top, nd.bottom, q, nd.rightp);
    const u32 up = new_node(nd.top, (int)seg_id, p, q);
    const u32 lo = new_node((int)seg_id, nd.bottom, p, q);
    nodes_[d].leaf = false;
    nodes_[d].splitter = (int)seg_id;
    nodes_[d].child_left = a;
    nodes_[d].child_right = b;
    nodes_[d].child_upper = up;
    nodes_[d].child_lower = lo;
    --leaf_count_;
    created = {a, b, up, lo};
  } else {
    const std::size_t k = seq.size() - 1;
    const u32 a = new_node(nodes_[seq[0]].top, nodes_[seq[0]].bottom, nodes_[seq[0]].leftp, p);
    const u32 b = new_node(nodes_[seq[k]].top, nodes_[seq[k]].bottom, q, nodes_[seq[k]].rightp);
    // Open upper/lower runs at p; a wall point above the segment closes the
    // upper run (the wall below the segment is erased, merging the lower
    // side), and symmetrically below.
    struct Run {
      int top, bottom;
      Point2 leftp, rightp;
    };
    std::vector<Run> uppers{{nodes_[seq[0]].top, (int)seg_id, p, q}};
    std::vector<Run> lowers{{(int)seg_id, nodes_[seq[0]].bottom, p, q}};
    std::vector<std::size_t> u_of(seq.size()), l_of(seq.size());
    u_of[0] = 0;
    l_of[0] = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const Point2 w = nodes_[seq[i]].rightp;
      if (above[i]) {
        uppers.back().rightp = w;
        uppers.push_back({nodes_[seq[i + 1]].top, (int)seg_id, w, q});
      } else {
        lowers.back().rightp = w;
        lowers.push_back({(int)seg_id, nodes_[seq[i + 1]].bottom, w, q});
      }
      u_of[i + 1] = uppers.size() - 1;
      l_of[i + 1] = lowers.size() - 1;
    }
    std::vector<u32> uid, lid;
    for (const Run& r : uppers) uid.push_back(new_node(r.top, r.bottom, r.leftp, r.rightp));
    for (const Run& r : lowers) lid.push_back(new_node(r.top, r.bottom, r.leftp, r.rightp));
    created = {a, b};
    created.insert(created.end(), uid.begin(), uid.end());
    created.insert(created.end(), lid.begin(), lid.end());
    for (std::size_t i = 0; i <= k; ++i) {
      TrapNode& nd = nodes_[seq[i]];
      nd.leaf = false;
      nd.splitter = (int)seg_id;
      nd.child_upper = uid[u_of[i]];
      nd.child_lower = lid[l_of[i]];
      if (i == 0) nd.child_left = a;
      if (i == k) nd.child_right = b;
      --leaf_count_;
    }
  }
  rewire(seq, created);
}

namespace {

// Heights of a trapezoid side at an integer abscissa, as an exact rational.
bigrat side_height(const std::vector<Segment2>& segs, int side, bool is_top, i64 x) {
  if (is_top && side == kTrapTopSentinel) return bigrat(big(kBoxBound));
  if (!is_top && side == kTrapBottomSentinel) return bigrat(big(-kBoxBound));
  const Segment2& s = segs[side];
  const big num = big(s.a.y) * (s.b.x - s.a.x) + big(s.b.y - s.a.y) * (x - s.a.x);
  return bigrat(num, big(s.b.x - s.a.x));
}

}  // namespace

void TrapezoidMap::rewire(const std::vector<u32>& destroyed, const std::vector<u32>& created) {
  // Candidates: the new leaves plus every external leaf that was adjacent to
  // a destroyed trapezoid. Only slots that pointed into the destroyed set
  // (all four, for new leaves) are repaired; links to untouched neighbors
  // stay as they are.
  std::vector<u32> cand = created;
  auto push_ext = [&](u32 h) {
    if (h == kTrapNone || !nodes_[h].leaf) return;
    if (std::find(cand.begin(), cand.end(), h) == cand.end()) cand.push_back(h);
  };
  for (u32 d : destroyed) {
    push_ext(nodes_[d].ul);
    push_ext(nodes_[d].ll);
    push_ext(nodes_[d].ur);
    push_ext(nodes_[d].lr);
  }

  struct Dirty {
    bool ul = false, ll = false, ur = false, lr = false;
  };
  std::vector<Dirty> dirty(cand.size());
  auto stale = [&](u32 h) { return h == kTrapNone || !nodes_[h].leaf; };
  for (std::size_t i = 0; i < cand.size(); ++i) {
    TrapNode& nd = nodes_[cand[i]];
    const bool fresh =
        std::find(created.begin(), created.end(), cand[i]) != created.end();
    dirty[i].ul = fresh || stale(nd.ul);
    dirty[i].ll = fresh || stale(nd.ll);
    dirty[i].ur = fresh || stale(nd.ur);
    dirty[i].lr = fresh || stale(nd.lr);
    if (dirty[i].ul) nd.ul = kTrapNone;
    if (dirty[i].ll) nd.ll = kTrapNone;
    if (dirty[i].ur) nd.ur = kTrapNone;
    if (dirty[i].lr) nd.lr = kTrapNone;
  }

  auto degenerate = [&](u32 h) { return nodes_[h].leftp.x >= nodes_[h].rightp.x; };
  auto vertical_overlap = [&](u32 zl, u32 zr, i64 x0) {
    const TrapNode& L = nodes_[zl];
    const TrapNode& R = nodes_[zr];
    const bigrat lo = std::max(side_height(segs_, L.bottom, false, x0),
                               side_height(segs_, R.bottom, false, x0));
    const bigrat hi =
        std::min(side_height(segs_, L.top, true, x0), side_height(segs_, R.top, true, x0));
    return lo < hi;
  };

  for (std::size_t i = 0; i < cand.size(); ++i) {
    const u32 z = cand[i];
    TrapNode& nd = nodes_[z];

    if (dirty[i].ur || dirty[i].lr) {
      std::vector<u32> rights;
      if (nd.ur != kTrapNone) rights.push_back(nd.ur);
      if (nd.lr != kTrapNone && nd.lr != nd.ur) rights.push_back(nd.lr);
      if (!degenerate(z))
        for (u32 y : cand) {
          if (y == z || degenerate(y)) continue;
          if (nodes_[y].leftp.x != nd.rightp.x) continue;
          if (std::find(rights.begin(), rights.end(), y) != rights.end()) continue;
          if (vertical_overlap(z, y, nd.rightp.x)) rights.push_back(y);
        }
      if (rights.size() == 1) {
        if (dirty[i].ur) nd.ur = rights[0];
        if (dirty[i].lr) nd.lr = rights[0];
      } else if (rights.size() >= 2) {
        // Sort vertically; the topmost shares the top boundary.
        std::sort(rights.begin(), rights.end(), [&](u32 a, u32 b) {
          return side_height(segs_, nodes_[a].bottom, false, nd.rightp.x) >
                 side_height(segs_, nodes_[b].bottom, false, nd.rightp.x);
        });
        if (dirty[i].ur) nd.ur = rights.front();
        if (dirty[i].lr) nd.lr = rights.back();
      }
    }

    if (dirty[i].ul || dirty[i].ll) {
      std::vector<u32> lefts;
      if (nd.ul != kTrapNone) lefts.push_back(nd.ul);
      if (nd.ll != kTrapNone && nd.ll != nd.ul) lefts.push_back(nd.ll);
      if (!degenerate(z))
        for (u32 y : cand) {
          if (y == z || degenerate(y)) continue;
          if (nodes_[y].rightp.x != nd.leftp.x) continue;
          if (std::find(lefts.begin(), lefts.end(), y) != lefts.end()) continue;
          if (vertical_overlap(y, z, nd.leftp.x)) lefts.push_back(y);
        }
      if (lefts.size() == 1) {
        if (dirty[i].ul) nd.ul = lefts[0];
        if (dirty[i].ll) nd.ll = lefts[0];
      } else if (lefts.size() >= 2) {
        std::sort(lefts.begin(), lefts.end(), [&](u32 a, u32 b) {
          return side_height(segs_, nodes_[a].bottom, false, nd.leftp.x) >
                 side_height(segs_, nodes_[b].bottom, false, nd.leftp.x);
        });
        if (dirty[i].ul) nd.ul = lefts.front();
        if (dirty[i].ll) nd.ll = lefts.back();
      }
    }
  }
}

void TrapezoidMap::check_children_cover() const {
  for (u32 d = 0; d < nodes_.size(); ++d) {
    const TrapNode& nd = nodes_[d];
    if (nd.leaf) continue;
    const bigrat parent_area =
        (side_height(segs_, nd.top, true, nd.leftp.x) -
         side_height(segs_, nd.bottom, false, nd.leftp.x) +
         side_height(segs_, nd.top, true, nd.rightp.x) -
         side_height(segs_, nd.bottom, false, nd.rightp.x)) *
        bigrat(big(nd.rightp.x - nd.leftp.x), big(2));
    bigrat covered(big(0));
    for (u32 c : {nd.child_left, nd.child_right, nd.child_upper, nd.child_lower}) {
      if (c == kTrapNone) continue;
      const TrapNode& ch = nodes_[c];
      const i64 x1 = std::max(ch.leftp.x, nd.leftp.x);
      const i64 x2 = std::min(ch.rightp.x, nd.rightp.x);
      if (x1 >= x2) throw StructuralError("child does not overlap parent");
      covered += (side_height(segs_, ch.top, true, x1) - side_height(segs_, ch.bottom, false, x1) +
                  side_height(segs_, ch.top, true, x2) - side_height(segs_, ch.bottom, false, x2)) *
                 bigrat(big(x2 - x1), big(2));
    }
    if (covered != parent_area) throw StructuralError("children do not cover parent exactly");
  }
}

void TrapezoidMap::check_leaf_tiling() const {
  const auto ls = leaves();
  bigrat total(big(0));
  for (u32 id : ls) {
    const TrapNode& nd = nodes_[id];
    if (nd.leftp.x >= nd.rightp.x) throw StructuralError("degenerate leaf");
    total += (side_height(segs_, nd.top, true, nd.leftp.x) -
              side_height(segs_, nd.bottom, false, nd.leftp.x) +
              side_height(segs_, nd.top, true, nd.rightp.x) -
              side_height(segs_, nd.bottom, false, nd.rightp.x)) *
             bigrat(big(nd.rightp.x - nd.leftp.x), big(2));
  }
  const bigrat box = bigrat(big(2) * kBoxBound) * bigrat(big(2) * kBoxBound);
  if (total != box) throw StructuralError("leaf areas do not tile the box");
  for (std::size_t i = 0; i < ls.size(); ++i)
    for (std::size_t j = i + 1; j < ls.size(); ++j) {
      const TrapNode& A = nodes_[ls[i]];
      const TrapNode& B = nodes_[ls[j]];
      const i64 x1 = std::max(A.leftp.x, B.leftp.x);
      const i64 x2 = std::min(A.rightp.x, B.rightp.x);
      if (x1 >= x2) continue;
      // Segments never cross, so vertical order over the overlap is constant
      // and a single interior abscissa decides interior disjointness. The
      // doubled coordinate keeps the midpoint exact.
      const bigrat mid = bigrat(big(x1) + big(x2), big(2));
      auto h = [&](int side, bool is_top) {
        if (is_top && side == kTrapTopSentinel) return bigrat(big(kBoxBound));
        if (!is_top && side == kTrapBottomSentinel) return bigrat(big(-kBoxBound));
        const Segment2& s = segs_[side];
        return bigrat(big(s.a.y)) + bigrat(big(s.b.y - s.a.y)) *
                                        (mid - bigrat(big(s.a.x))) / bigrat(big(s.b.x - s.a.x));
      };
      const bigrat lo = std::max(h(A.bottom, false), h(B.bottom, false));
      const bigrat hi = std::min(h(A.top, true), h(B.top, true));
      if (lo < hi) throw StructuralError("leaf interiors overlap");
    }
}

}  // namespace ngeo
