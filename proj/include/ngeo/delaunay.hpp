// Randomized incremental Delaunay triangulation. Point location walks the
// triangle history DAG (3 children on a point split, 2 on a flip); flip
// repair amplifies each in-circle test with the repetition strategy. The
// super-triangle vertices are ordinary integer points far outside the
// coordinate bound; faces incident to them are dropped from the result.
#pragma once

#include <array>
#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/noise.hpp"
#include "ngeo/walk.hpp"

namespace ngeo {

inline constexpr u32 kDtNone = 0xffffffffu;

struct DtNode {
  std::array<u32, 3> v{};    // vertex ids, CCW
  std::array<u32, 3> nbr{kDtNone, kDtNone, kDtNone};  // nbr[i] faces edge opposite v[i]
  bool leaf = true;
  std::uint8_t sel = 0;  // 0 leaf-forever, 1 point split, 2 edge flip
  u32 sel_a = kDtNone;  // split: inserted point; flip: diagonal (sel_a, sel_b)
  u32 sel_b = kDtNone;
  std::array<u32, 3> child{kDtNone, kDtNone, kDtNone};
  int nchild = 0;
};

struct DelaunayConfig {
  double c = 2.0;
  double p_e_max = 1.0 / 16.0;
  int max_retries = 3;
  bool instrumented = false;
};

class DelaunayTriangulation {
 public:
  static DelaunayTriangulation build(const std::vector<Point2>& points, NoisyContext& ctx,
                                     const DelaunayConfig& cfg, WalkStats* stats = nullptr);

  // Leaf triangle containing q via a pushdown walk over the history DAG.
  u32 locate(Point2 q, NoisyContext& ctx, WalkStats* stats = nullptr) const;
  u32 exact_locate(Point2 q) const;

  // Canonical result: sorted vertex-index triples of regular leaves.
  std::vector<std::array<u32, 3>> result_triangles() const;
  // Unique edges of the reported triangulation.
  std::vector<std::pair<u32, u32>> result_edges() const;

  const DtNode& node(u32 id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  u32 point_count() const { return n_; }
  const std::vector<Point2>& vertices() const { return verts_; }
  // CCW-ordered ring of triangles created by insertion i (radial record).
  const std::vector<u32>& insertion_ring(u32 i) const { return rings_[i]; }
  std::size_t flip_count() const { return flips_; }

  // Exact instrumented checks: leaves tile the super-triangle, rings are
  // CCW-consistent fans around their insertion point.
  void check_leaf_tiling() const;
  void check_rings() const;

 private:
  DelaunayTriangulation(const std::vector<Point2>& points, const DelaunayConfig& cfg, double p);
  struct DagView;
  friend struct DagView;

  void insert_point(u32 pid, NoisyContext& ctx, WalkStats* stats);
  void legalize(u32 t_node, NoisyContext& ctx, std::vector<u32>& created);
  u32 new_tri(u32 a, u32 b, u32 c);
  int index_of(u32 node, u32 vert) const;
  void replace_neighbor(u32 node, u32 old_nbr, u32 new_nbr);
  bool contains_exact(u32 node, Point2 q) const;

  u32 n_ = 0;
  std::vector<Point2> verts_;  // inputs then the three super vertices
  std::vector<DtNode> nodes_;
  std::vector<std::vector<u32>> rings_;
  std::size_t flips_ = 0;
  DelaunayConfig cfg_;
  RepetitionPlan plan_oracle_;
  RepetitionPlan plan_flip_;
  double epsilon_ = 1e-6;
};

// Euclidean MST: Delaunay edges sorted by a noisy length comparator, then
// Kruskal with an exact union-find.
std::vector<std::pair<u32, u32>> euclidean_mst(const std::vector<Point2>& points,
                                               NoisyContext& ctx, const DelaunayConfig& cfg,
                                               WalkStats* stats = nullptr);

}  // namespace ngeo
