#include "ngeo/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ngeo/instance.hpp"
#include "ngeo/predicates.hpp"
#include "ngeo/rbtree.hpp"

namespace ngeo {

namespace {

// Super-triangle vertices, scaled 8x beyond the coordinate bound. The odd
// offsets keep them off the axis and diagonal grid lines (a vertex at
// (0, 8B) would be exactly collinear with every input pair sharing x = 0),
// and the lines through any two of them pass at least 6*kCoordBound away
// from the input grid.
constexpr i64 kSuper = 8 * kCoordBound;
constexpr Point2 kSuperA{-kSuper - 3, -kSuper - 1};
constexpr Point2 kSuperB{kSuper + 5, -kSuper - 7};
constexpr Point2 kSuperC{11, kSuper + 13};

bool pierces(Sign s, const char* what) {
  if (s == Sign::zero) throw GeneralPositionViolation(what);
  return s == Sign::positive;
}

}  // namespace

DelaunayTriangulation::DelaunayTriangulation(const std::vector<Point2>& points,
                                             const DelaunayConfig& cfg, double p)
    : n_((u32)points.size()), verts_(points), cfg_(cfg) {
  const double n_eff = std::max<double>(2.0, double(n_));
  epsilon_ = std::pow(n_eff, -cfg.c);
  // Six primitive tests per consultation: three containment, up to three to
  // pick a child.
  plan_oracle_ = repetitions_for(p, cfg.p_e_max / 6.0);
  plan_flip_ = repetitions_for(p, std::pow(n_eff, -(cfg.c + 1.0)));
  verts_.push_back(kSuperA);
  verts_.push_back(kSuperB);
  verts_.push_back(kSuperC);
  DtNode root;
  root.v = {n_, n_ + 1, n_ + 2};
  nodes_.push_back(root);
  rings_.resize(n_);
}

u32 DelaunayTriangulation::new_tri(u32 a, u32 b, u32 c) {
  DtNode nd;
  nd.v = {a, b, c};
  nodes_.push_back(nd);
  return (u32)nodes_.size() - 1;
}

int DelaunayTriangulation::index_of(u32 node, u32 vert) const {
  for (int i = 0; i < 3; ++i)
    if (nodes_[node].v[i] == vert) return i;
  throw StructuralError("vertex not in triangle");
}

void DelaunayTriangulation::replace_neighbor(u32 node, u32 old_nbr, u32 new_nbr) {
  if (node == kDtNone) return;
  for (int i = 0; i < 3; ++i)
    if (nodes_[node].nbr[i] == old_nbr) {
      nodes_[node].nbr[i] = new_nbr;
      return;
    }
}

bool DelaunayTriangulation::contains_exact(u32 node, Point2 q) const {
  const DtNode& nd = nodes_[node];
  for (int i = 0; i < 3; ++i)
    if (orient2d(verts_[nd.v[i]], verts_[nd.v[(i + 1) % 3]], q) != Sign::positive) return false;
  return true;
}

u32 DelaunayTriangulation::exact_locate(Point2 q) const {
  u32 cur = 0;
  while (!nodes_[cur].leaf) {
    u32 next = kDtNone;
    for (int i = 0; i < nodes_[cur].nchild; ++i)
      if (contains_exact(nodes_[cur].child[i], q)) {
        next = nodes_[cur].child[i];
        break;
      }
    if (next == kDtNone) throw StructuralError("exact locate lost the query point");
    cur = next;
  }
  return cur;
}

struct DelaunayTriangulation::DagView {
  const DelaunayTriangulation* t;
  bool contains(WalkVertex v) const { return v < t->nodes_.size(); }
  bool is_edge(WalkVertex a, WalkVertex b) const {
    const DtNode& nd = t->nodes_[a];
    for (int i = 0; i < nd.nchild; ++i)
      if (nd.child[i] == b) return true;
    return false;
  }
  std::size_t out_degree(WalkVertex v) const { return t->nodes_[v].nchild; }
};

u32 DelaunayTriangulation::locate(Point2 q, NoisyContext& ctx, WalkStats* stats) const {
  WalkConfig wc;
  wc.epsilon = epsilon_;
  wc.p_e_max = cfg_.p_e_max;
  wc.path_hint = 4.0 * std::log2(double(nodes_.size()) + 2.0) + 8.0;
  wc.max_retries = cfg_.max_retries;

  auto amp = [&](auto&& pred) { return majority_vote(ctx, pred, plan_oracle_); };
  auto spoke = [&](u32 a, u32 b, Point2 p) {
    return pierces(orient2d(verts_[a], verts_[b], p), "query on a triangulation edge");
  };
  auto oracle = [&](WalkVertex v) -> Transition {
    const DtNode& nd = nodes_[v];
    const bool inside = amp([&] { return spoke(nd.v[0], nd.v[1], q); }) &&
                        amp([&] { return spoke(nd.v[1], nd.v[2], q); }) &&
                        amp([&] { return spoke(nd.v[2], nd.v[0], q); });
    if (!inside) return {false, kNoVertex};
    if (nd.leaf) return {true, v};
    if (nd.sel == 2) {
      // Flip node: one test against the new diagonal picks the child.
      const bool left = amp([&] { return spoke(nd.sel_a, nd.sel_b, q); });
      return {true, nd.child[left ? 1 : 0]};
    }
    // Split node: wedge tests against the spokes around the inserted point.
    const u32 p = nd.sel_a;
    bool hit[3];
    for (int i = 0; i < 3; ++i)
      hit[i] = amp([&] { return spoke(p, nodes_[nd.child[i]].v[1], q); });
    for (int i = 0; i < 3; ++i)
      if (hit[i] && !hit[(i + 1) % 3]) return {true, nd.child[i]};
    return {true, nd.child[0]};  // inconsistent answers; any child keeps moving
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

DelaunayTriangulation DelaunayTriangulation::build(const std::vector<Point2>& points,
                                                   NoisyContext& ctx, const DelaunayConfig& cfg,
                                                   WalkStats* stats) {
  validate_points_general_position(points);
  DelaunayTriangulation dt(points, cfg, ctx.p());
  const auto perm = random_permutation((u32)points.size(), ctx);
  for (u32 pid : perm) {
    dt.insert_point(pid, ctx, stats);
    if (cfg.instrumented) dt.check_leaf_tiling();
  }
  if (cfg.instrumented) dt.check_rings();
  return dt;
}

void DelaunayTriangulation::insert_point(u32 pid, NoisyContext& ctx, WalkStats* stats) {
  const Point2 p = verts_[pid];
  const u32 leaf = locate(p, ctx, stats);

  DtNode& t = nodes_[leaf];
  const std::array<u32, 3> v = t.v;
  const std::array<u32, 3> nb = t.nbr;
  // Split into three CCW children, the inserted point first in each.
  const u32 c0 = new_tri(pid, v[0], v[1]);
  const u32 c1 = new_tri(pid, v[1], v[2]);
  const u32 c2 = new_tri(pid, v[2], v[0]);
  nodes_[c0].nbr = {nb[2], c1, c2};
  nodes_[c1].nbr = {nb[0], c2, c0};
  nodes_[c2].nbr = {nb[1], c0, c1};
  replace_neighbor(nb[2], leaf, c0);
  replace_neighbor(nb[0], leaf, c1);
  replace_neighbor(nb[1], leaf, c2);
  DtNode& tt = nodes_[leaf];
  tt.leaf = false;
  tt.sel = 1;
  tt.sel_a = pid;
  tt.child = {c0, c1, c2};
  tt.nchild = 3;

  std::vector<u32> created{c0, c1, c2};
  legalize(c0, ctx, created);
  legalize(c1, ctx, created);
  legalize(c2, ctx, created);

  // Radial record: the CCW ring of surviving triangles around the point.
  std::vector<u32> ring;
  u32 start = kDtNone;
  for (u32 c : created)
    if (nodes_[c].leaf) {
      start = c;
      break;
    }
  if (start != kDtNone) {
    u32 cur = start;
    do {
      ring.push_back(cur);
      cur = nodes_[cur].nbr[1];  // neighbor across (p, v[2]): next CCW fan face
      if (cur == kDtNone || ring.size() > created.size() + 3) break;
    } while (cur != start);
  }
  rings_[pid] = std::move(ring);
}

void DelaunayTriangulation::legalize(u32 t_node, NoisyContext& ctx, std::vector<u32>& created) {
  std::vector<u32> agenda{t_node};
  while (!agenda.empty()) {
    const u32 tn = agenda.back();
    agenda.pop_back();
    if (!nodes_[tn].leaf) continue;
    const u32 p = nodes_[tn].v[0];
    const u32 u = nodes_[tn].v[1];
    const u32 w = nodes_[tn].v[2];
    const u32 nn = nodes_[tn].nbr[0];
    if (nn == kDtNone) continue;  // super-triangle boundary
    u32 dv = kDtNone;
    for (int i = 0; i < 3; ++i)
      if (nodes_[nn].v[i] != u && nodes_[nn].v[i] != w) dv = nodes_[nn].v[i];
    const bool flip = majority_vote(
        ctx,
        [&] {
          return pierces(in_circle(verts_[p], verts_[u], verts_[w], verts_[dv]),
                         "cocircular points in flip test");
        },
        plan_flip_);
    if (!flip) continue;
    ++flips_;
    const int iu = index_of(nn, u);
    const int iw = index_of(nn, w);
    const u32 n_across_ud = nodes_[nn].nbr[iw];  // neighbor of N across (u, d)
    const u32 n_across_dw = nodes_[nn].nbr[iu];  // neighbor of N across (d, w)
    const u32 t_nbr1 = nodes_[tn].nbr[1];
    const u32 t_nbr2 = nodes_[tn].nbr[2];
    const u32 a = new_tri(p, u, dv);
    const u32 b = new_tri(p, dv, w);
    nodes_[a].nbr = {n_across_ud, b, t_nbr2};
    nodes_[b].nbr = {n_across_dw, t_nbr1, a};
    replace_neighbor(n_across_ud, nn, a);
    replace_neighbor(n_across_dw, nn, b);
    replace_neighbor(t_nbr2, tn, a);
    replace_neighbor(t_nbr1, tn, b);
    for (u32 dead : {tn, nn}) {
      nodes_[dead].leaf = false;
      nodes_[dead].sel = 2;
      nodes_[dead].sel_a = p;
      nodes_[dead].sel_b = dv;
      nodes_[dead].child = {a, b, kDtNone};
      nodes_[dead].nchild = 2;
    }
    created.push_back(a);
    created.push_back(b);
    agenda.push_back(a);
    agenda.push_back(b);
  }
}

std::vector<std::array<u32, 3>> DelaunayTriangulation::result_triangles() const {
  std::vector<std::array<u32, 3>> out;
  for (const DtNode& nd : nodes_) {
    if (!nd.leaf) continue;
    if (nd.v[0] >= n_ || nd.v[1] >= n_ || nd.v[2] >= n_) continue;
    std::array<u32, 3> t = nd.v;
    std::sort(t.begin(), t.end());
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<u32, u32>> DelaunayTriangulation::result_edges() const {
  std::vector<std::pair<u32, u32>> edges;
  for (const auto& t : result_triangles()) {
    edges.push_back({t[0], t[1]});
    edges.push_back({t[0], t[2]});
    edges.push_back({t[1], t[2]});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void DelaunayTriangulation::check_leaf_tiling() const {
  // Leaves are CCW and their doubled areas sum to the super-triangle's.
  i128 total = 0;
  std::size_t leaves = 0;
  for (const DtNode& nd : nodes_) {
    if (!nd.leaf) continue;
    ++leaves;
    const Point2 a = verts_[nd.v[0]], b = verts_[nd.v[1]], c = verts_[nd.v[2]];
    const i128 doubled = i128(b.x - a.x) * (c.y - a.y) - i128(b.y - a.y) * (c.x - a.x);
    if (doubled <= 0) throw StructuralError("leaf triangle not CCW");
    total += doubled;
  }
  const Point2 s0 = verts_[n_], s1 = verts_[n_ + 1], s2 = verts_[n_ + 2];
  const i128 super = i128(s1.x - s0.x) * (s2.y - s0.y) - i128(s1.y - s0.y) * (s2.x - s0.x);
  if (total != super) throw StructuralError("leaves do not tile the super-triangle");
  std::size_t inserted = 0;
  for (const auto& r : rings_)
    if (!r.empty()) ++inserted;
  if (leaves != 2 * inserted + 1) throw StructuralError("leaf count violates the split/flip ledger");
}

void DelaunayTriangulation::check_rings() const {
  for (u32 pid = 0; pid < n_; ++pid) {
    const auto& ring = rings_[pid];
    if (ring.empty()) throw StructuralError("missing radial record");
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const DtNode& cur = nodes_[ring[i]];
      const DtNode& nxt = nodes_[ring[(i + 1) % ring.size()]];
      if (cur.v[0] != pid || nxt.v[0] != pid) throw StructuralError("ring face misses the point");
      if (cur.v[2] != nxt.v[1]) throw StructuralError("ring faces not CCW-consecutive");
      if (orient2d(verts_[cur.v[0]], verts_[cur.v[1]], verts_[cur.v[2]]) != Sign::positive)
        throw StructuralError("ring face not CCW");
    }
  }
}

std::vector<std::pair<u32, u32>> euclidean_mst(const std::vector<Point2>& points,
                                               NoisyContext& ctx, const DelaunayConfig& cfg,
                                               WalkStats* stats) {
  const auto dt = DelaunayTriangulation::build(points, ctx, cfg, stats);
  const auto edges = dt.result_edges();
  const u32 n = (u32)points.size();
  const double n_eff = std::max<double>(2.0, double(n));
  const auto tree_cfg = make_tree_config(ctx.p(), std::pow(n_eff, -cfg.c), cfg.p_e_max);

  struct EdgeCmp {
    const std::vector<Point2>* pts;
    const std::vector<std::pair<u32, u32>>* edges;
    Sign operator()(u32 a, u32 b) const {
      const auto& ea = (*edges)[a];
      const auto& eb = (*edges)[b];
      const Sign s = compare_dist((*pts)[ea.first], (*pts)[ea.second], (*pts)[eb.first],
                                  (*pts)[eb.second]);
      if (s != Sign::zero) return s;
      if (a == b) return Sign::zero;
      return a < b ? Sign::negative : Sign::positive;  // handle identity, non-noisy
    }
  };
  std::vector<u32> ids(edges.size());
  std::iota(ids.begin(), ids.end(), 0);
  const auto sorted = noisy_sort(ids, EdgeCmp{&points, &edges}, ctx, tree_cfg, stats);

  // Kruskal; union-find on indices is not a noisy operation.
  std::vector<u32> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](u32 v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<std::pair<u32, u32>> mst;
  for (u32 id : sorted) {
    const auto [a, b] = edges[id];
    const u32 ra = find(a), rb = find(b);
    if (ra == rb) continue;
    parent[ra] = rb;
    mst.push_back({a, b});
    if (mst.size() + 1 == n) break;
  }
  return mst;
}

}  // namespace ngeo
