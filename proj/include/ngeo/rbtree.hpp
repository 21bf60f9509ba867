// Red-black tree over noisily-comparable keys. Each node carries lo/hi links
// to the lowest ancestors bounding its subtree's key interval, which lets a
// transition oracle decide "is this node on the search path?" with two noisy
// comparisons. Searches run as path-guided pushdown walks; all structural
// manipulation (rotations, splices, min pointer) is non-noisy.
//
// Rotations repair the bound links of only the two rotated nodes. Deletion
// of an inner node additionally repoints the spine nodes whose bound was the
// removed node (O(log n), within the structure's repair budget).
#pragma once

#include <cmath>
#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/noise.hpp"
#include "ngeo/walk.hpp"

namespace ngeo {

struct NoisyTreeConfig {
  WalkConfig walk;        // epsilon here is the per-operation half-budget
  RepetitionPlan prim;    // per-comparison amplification inside walk oracles
  RepetitionPlan confirm; // terminal equality confirmation
};

inline NoisyTreeConfig make_tree_config(double p, double epsilon, double p_e_max = 1.0 / 16.0) {
  NoisyTreeConfig cfg;
  cfg.walk.epsilon = epsilon / 2;
  cfg.walk.p_e_max = p_e_max;
  // Four comparisons per consultation (two on-path, up to two next-vertex);
  // amplify each so their union stays below the oracle error bound.
  cfg.prim = repetitions_for(p, p_e_max / 4);
  cfg.confirm = repetitions_for(p, epsilon / 2);
  return cfg;
}

template <class Key, class Cmp>
class NoisyTree {
 public:
  using Handle = u32;
  static constexpr Handle nil = 0;
  static constexpr Handle npos = 0;
  // Bound-link sentinels for -infinity / +infinity.
  static constexpr Handle kLoInf = 0xfffffffeu;
  static constexpr Handle kHiInf = 0xfffffffdu;

  explicit NoisyTree(Cmp cmp = Cmp{}) : cmp_(std::move(cmp)) {
    nodes_.push_back(Node{});  // nil sentinel, black
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  Handle root() const { return root_; }
  const Key& key(Handle h) const { return nodes_[h].key; }
  Handle left(Handle h) const { return nodes_[h].left; }
  Handle right(Handle h) const { return nodes_[h].right; }
  Handle parent(Handle h) const { return nodes_[h].parent; }
  Handle lo_bound(Handle h) const { return nodes_[h].lo; }
  Handle hi_bound(Handle h) const { return nodes_[h].hi; }
  const Cmp& comparator() const { return cmp_; }

  bool is_live(Handle h) const {
    return h != nil && h < nodes_.size() && h != kLoInf && h != kHiInf && nodes_[h].in_tree;
  }

  struct SearchOutcome {
    Handle node = npos;
    bool found = false;
    bool go_left = false;  // frontier side when not found
    WalkStats stats;
  };

  // Walk-based search: returns the node holding q, or the frontier node under
  // which q would attach, correct with probability >= 1 - epsilon.
  SearchOutcome search(const Key& q, NoisyContext& ctx, const NoisyTreeConfig& cfg) const {
    SearchOutcome out;
    if (root_ == nil) return out;
    if (size_ == 1) {
      classify(q, root_, ctx, cfg, out);
      return out;
    }
    WalkConfig wc = cfg.walk;
    wc.path_hint = 2.0 * std::log2(double(size_) + 1.0) + 4.0;
    DagView dag{this};
    for (int attempt = 0;; ++attempt) {
      WalkOutcome wo;
      try {
        wo = run_walk_on_tree(dag, make_oracle(q, ctx, cfg), root_, wc);
      } catch (const BudgetExhausted&) {
        if (attempt >= wc.max_retries) throw;
        out.stats.retries++;
        continue;
      }
      out.stats.merge(wo.stats);
      classify(q, wo.terminal, ctx, cfg, out);
      if (out.found) return out;
      // A frontier position must have a missing child on the claimed side;
      // anything else means the walk went astray, so retry with fresh noise.
      const Handle child = out.go_left ? nodes_[out.node].left : nodes_[out.node].right;
      if (child == nil) return out;
      if (attempt >= wc.max_retries) throw BudgetExhausted("tree search: inconsistent terminal");
      out.stats.retries++;
    }
  }

  // Inserts a key not already present. Rebalancing uses no noisy comparisons.
  Handle insert(const Key& k, NoisyContext& ctx, const NoisyTreeConfig& cfg,
                WalkStats* stats = nullptr) {
    if (root_ == nil) {
      const Handle h = new_node(k);
      root_ = h;
      min_ = h;
      nodes_[h].red = false;
      nodes_[h].lo = kLoInf;
      nodes_[h].hi = kHiInf;
      ++size_;
      return h;
    }
    for (int attempt = 0;; ++attempt) {
      SearchOutcome so = search(k, ctx, cfg);
      if (stats) stats->merge(so.stats);
      if (!so.found) return attach(k, so.node, so.go_left);
      // Duplicates are excluded by precondition, so "found" is a walk error.
      if (attempt >= cfg.walk.max_retries)
        throw BudgetExhausted("tree insert: search kept reporting the key as present");
      if (stats) stats->retries++;
    }
  }

  // Removes a node by handle; purely structural.
  void erase(Handle z) {
    if (!is_live(z)) throw InvalidHandle("erase: handle not in tree");
    if (z == min_) min_ = nodes_[z].right != nil ? leftmost(nodes_[z].right) : nodes_[z].parent;

    Handle x = nil;
    bool removed_black;
    if (nodes_[z].left == nil || nodes_[z].right == nil) {
      x = nodes_[z].left == nil ? nodes_[z].right : nodes_[z].left;
      // Spine nodes bounded by z inherit z's bound.
      if (nodes_[z].right != nil)
        for (Handle u = x; u != nil; u = nodes_[u].left)
          if (nodes_[u].lo == z) nodes_[u].lo = nodes_[z].lo;
      if (nodes_[z].left != nil)
        for (Handle u = x; u != nil; u = nodes_[u].right)
          if (nodes_[u].hi == z) nodes_[u].hi = nodes_[z].hi;
      removed_black = !nodes_[z].red;
      transplant(z, x);
    } else {
      const Handle y = leftmost(nodes_[z].right);
      removed_black = !nodes_[y].red;
      x = nodes_[y].right;
      // Nodes whose bound link was z must now point at y, its replacement.
      for (Handle u = nodes_[z].left; u != nil; u = nodes_[u].right)
        if (nodes_[u].hi == z) nodes_[u].hi = y;
      for (Handle u = nodes_[z].right; u != nil && u != y; u = nodes_[u].left)
        if (nodes_[u].lo == z) nodes_[u].lo = y;
      if (nodes_[y].parent == z) {
        nodes_[x].parent = y;  // x may be nil; the fixup reads its parent
      } else {
        transplant(y, nodes_[y].right);
        nodes_[y].right = nodes_[z].right;
        nodes_[nodes_[y].right].parent = y;
      }
      transplant(z, y);
      nodes_[y].left = nodes_[z].left;
      nodes_[nodes_[y].left].parent = y;
      nodes_[y].red = nodes_[z].red;
      nodes_[y].lo = nodes_[z].lo;
      nodes_[y].hi = nodes_[z].hi;
    }
    if (removed_black) delete_fixup(x);
    nodes_[nil].parent = nil;
    free_node(z);
    --size_;
    if (size_ == 0) {
      root_ = nil;
      min_ = nil;
    }
  }

  Handle min_node() const {
    if (root_ == nil) throw EmptyStructure("min of empty tree");
    return min_;
  }

  Key extract_min() {
    const Handle m = min_node();
    Key k = nodes_[m].key;
    erase(m);
    return k;
  }

  Handle successor(Handle h) const {
    if (nodes_[h].right != nil) return leftmost(nodes_[h].right);
    Handle p = nodes_[h].parent;
    while (p != nil && nodes_[p].right == h) {
      h = p;
      p = nodes_[p].parent;
    }
    return p;
  }

  Handle predecessor(Handle h) const {
    if (nodes_[h].left != nil) return rightmost(nodes_[h].left);
    Handle p = nodes_[h].parent;
    while (p != nil && nodes_[p].left == h) {
      h = p;
      p = nodes_[p].parent;
    }
    return p;
  }

  // Used by sweeps at crossing events; the callers own any external maps.
  void swap_payloads(Handle a, Handle b) {
    if (!is_live(a) || !is_live(b)) throw InvalidHandle("swap_payloads");
    std::swap(nodes_[a].key, nodes_[b].key);
  }

  std::vector<Handle> in_order() const {
    std::vector<Handle> out;
    out.reserve(size_);
    std::vector<Handle> stack;
    Handle v = root_;
    while (v != nil || !stack.empty()) {
      while (v != nil) {
        stack.push_back(v);
        v = nodes_[v].left;
      }
      v = stack.back();
      stack.pop_back();
      out.push_back(v);
      v = nodes_[v].right;
    }
    return out;
  }

  std::vector<Key> in_order_keys() const {
    std::vector<Key> out;
    out.reserve(size_);
    for (Handle h : in_order()) out.push_back(nodes_[h].key);
    return out;
  }

  // Test hooks: rotations must change the bounds of exactly the two rotated
  // nodes, which the unit tests assert by diffing.
  void debug_rotate_left(Handle h) { rotate_left(h); }
  void debug_rotate_right(Handle h) { rotate_right(h); }

  // Full structural audit: red-black shape, parent links, bound links equal
  // the interval recursion, min pointer, size.
  void check_invariants(bool check_order = true) const {
    if (nodes_[nil].red) throw StructuralError("nil must be black");
    if (root_ != nil && nodes_[root_].red) throw StructuralError("root must be black");
    if (root_ != nil && nodes_[root_].parent != nil) throw StructuralError("root parent");
    std::size_t count = 0;
    int black_height = -1;
    audit(root_, kLoInf, kHiInf, 0, black_height, count, check_order);
    if (count != size_) throw StructuralError("size mismatch");
    if (size_ > 0 && min_ != leftmost(root_)) throw StructuralError("min pointer stale");
    if (check_order) {
      auto keys = in_order_keys();
      for (std::size_t i = 1; i < keys.size(); ++i)
        if (cmp_(keys[i - 1], keys[i]) != Sign::negative)
          throw StructuralError("in-order sequence not strictly increasing");
    }
  }

 private:
  struct Node {
    Key key{};
    Handle left = nil;
    Handle right = nil;
    Handle parent = nil;
    Handle lo = kLoInf;
    Handle hi = kHiInf;
    bool red = false;
    bool in_tree = false;
  };

  struct DagView {
    const NoisyTree* t;
    bool contains(WalkVertex v) const { return t->is_live(v); }
    bool is_edge(WalkVertex a, WalkVertex b) const {
      return b != nil && (t->nodes_[a].left == b || t->nodes_[a].right == b);
    }
    std::size_t out_degree(WalkVertex v) const {
      return (t->nodes_[v].left != nil ? 1 : 0) + (t->nodes_[v].right != nil ? 1 : 0);
    }
  };

  auto make_oracle(const Key& q, NoisyContext& ctx, const NoisyTreeConfig& cfg) const {
    return [this, &q, &ctx, &cfg](WalkVertex v) -> Transition {
      const Node& nd = nodes_[v];
      // On-path test: q must lie strictly between the ancestor bounds.
      // Sentinel bounds compare exactly, without noise.
      bool above_lo = true, below_hi = true;
      if (nd.lo != kLoInf)
        above_lo = majority_vote(
            ctx, [&] { return cmp_(nodes_[nd.lo].key, q) == Sign::negative; }, cfg.prim);
      if (nd.hi != kHiInf)
        below_hi = majority_vote(
            ctx, [&] { return cmp_(q, nodes_[nd.hi].key) == Sign::negative; }, cfg.prim);
      if (!above_lo || !below_hi) return {false, kNoVertex};
      const bool less = majority_vote(
          ctx, [&] { return cmp_(q, nd.key) == Sign::negative; }, cfg.prim);
      if (less) return {true, nd.left != nil ? nd.left : v};
      const bool greater = majority_vote(
          ctx, [&] { return cmp_(q, nd.key) == Sign::positive; }, cfg.prim);
      if (greater) return {true, nd.right != nil ? nd.right : v};
      return {true, v};
    };
  }

  // High-confidence equality decision at the walk terminal.
  void classify(const Key& q, Handle v, NoisyContext& ctx, const NoisyTreeConfig& cfg,
                SearchOutcome& out) const {
    out.node = v;
    const bool less = majority_vote(
        ctx, [&] { return cmp_(q, nodes_[v].key) == Sign::negative; }, cfg.confirm);
    bool greater = false;
    if (!less)
      greater = majority_vote(
          ctx, [&] { return cmp_(q, nodes_[v].key) == Sign::positive; }, cfg.confirm);
    out.found = !less && !greater;
    out.go_left = less;
  }

  Handle attach(const Key& k, Handle parent, bool as_left) {
    const Handle z = new_node(k);
    nodes_[z].parent = parent;
    nodes_[z].red = true;
    if (as_left) {
      if (nodes_[parent].left != nil) throw StructuralError("attach: occupied slot");
      nodes_[parent].left = z;
      nodes_[z].hi = parent;
      nodes_[z].lo = nodes_[parent].lo;
      if (parent == min_) min_ = z;
    } else {
      if (nodes_[parent].right != nil) throw StructuralError("attach: occupied slot");
      nodes_[parent].right = z;
      nodes_[z].lo = parent;
      nodes_[z].hi = nodes_[parent].hi;
    }
    ++size_;
    insert_fixup(z);
    return z;
  }

  Handle new_node(const Key& k) {
    Handle h;
    if (!free_.empty()) {
      h = free_.back();
      free_.pop_back();
      nodes_[h] = Node{};
    } else {
      h = (Handle)nodes_.size();
      nodes_.push_back(Node{});
    }
    nodes_[h].key = k;
    nodes_[h].in_tree = true;
    return h;
  }

  void free_node(Handle h) {
    nodes_[h].in_tree = false;
    free_.push_back(h);
  }

  Handle leftmost(Handle h) const {
    while (nodes_[h].left != nil) h = nodes_[h].left;
    return h;
  }
  Handle rightmost(Handle h) const {
    while (nodes_[h].right != nil) h = nodes_[h].right;
    return h;
  }

  void transplant(Handle u, Handle v) {
    const Handle p = nodes_[u].parent;
    if (p == nil)
      root_ = v;
    else if (nodes_[p].left == u)
      nodes_[p].left = v;
    else
      nodes_[p].right = v;
    nodes_[v].parent = p;
  }

  // Rotations keep every unmoved subtree's key interval, so only the two
  // rotated nodes need their bounds rewritten.
  void rotate_left(Handle x) {
    const Handle y = nodes_[x].right;
    nodes_[y].lo = nodes_[x].lo;
    nodes_[y].hi = nodes_[x].hi;
    nodes_[x].hi = y;
    nodes_[x].right = nodes_[y].left;
    if (nodes_[y].left != nil) nodes_[nodes_[y].left].parent = x;
    transplant(x, y);
    nodes_[y].left = x;
    nodes_[x].parent = y;
  }

  void rotate_right(Handle x) {
    const Handle y = nodes_[x].left;
    nodes_[y].lo = nodes_[x].lo;
    nodes_[y].hi = nodes_[x].hi;
    nodes_[x].lo = y;
    nodes_[x].left = nodes_[y].right;
    if (nodes_[y].right != nil) nodes_[nodes_[y].right].parent = x;
    transplant(x, y);
    nodes_[y].right = x;
    nodes_[x].parent = y;
  }

  void insert_fixup(Handle z) {
    while (nodes_[nodes_[z].parent].red) {
      Handle p = nodes_[z].parent;
      Handle g = nodes_[p].parent;
      if (p == nodes_[g].left) {
        const Handle u = nodes_[g].right;
        if (nodes_[u].red) {
          nodes_[p].red = false;
          nodes_[u].red = false;
          nodes_[g].red = true;
          z = g;
        } else {
          if (z == nodes_[p].right) {
            z = p;
            rotate_left(z);
            p = nodes_[z].parent;
            g = nodes_[p].parent;
          }
          nodes_[p].red = false;
          nodes_[g].red = true;
          rotate_right(g);
        }
      } else {
        const Handle u = nodes_[g].left;
        if (nodes_[u].red) {
          nodes_[p].red = false;
          nodes_[u].red = false;
          nodes_[g].red = true;
          z = g;
        } else {
          if (z == nodes_[p].left) {
            z = p;
            rotate_right(z);
            p = nodes_[z].parent;
            g = nodes_[p].parent;
          }
          nodes_[p].red = false;
          nodes_[g].red = true;
          rotate_left(g);
        }
      }
    }
    nodes_[root_].red = false;
  }

  void delete_fixup(Handle x) {
    while (x != root_ && !nodes_[x].red) {
      Handle p = nodes_[x].parent;
      if (x == nodes_[p].left) {
        Handle w = nodes_[p].right;
        if (nodes_[w].red) {
          nodes_[w].red = false;
          nodes_[p].red = true;
          rotate_left(p);
          w = nodes_[p].right;
        }
        if (!nodes_[nodes_[w].left].red && !nodes_[nodes_[w].right].red) {
          nodes_[w].red = true;
          x = p;
        } else {
          if (!nodes_[nodes_[w].right].red) {
            nodes_[nodes_[w].left].red = false;
            nodes_[w].red = true;
            rotate_right(w);
            w = nodes_[p].right;
          }
          nodes_[w].red = nodes_[p].red;
          nodes_[p].red = false;
          nodes_[nodes_[w].right].red = false;
          rotate_left(p);
          x = root_;
        }
      } else {
        Handle w = nodes_[p].left;
        if (nodes_[w].red) {
          nodes_[w].red = false;
          nodes_[p].red = true;
          rotate_right(p);
          w = nodes_[p].left;
        }
        if (!nodes_[nodes_[w].right].red && !nodes_[nodes_[w].left].red) {
          nodes_[w].red = true;
          x = p;
        } else {
          if (!nodes_[nodes_[w].left].red) {
            nodes_[nodes_[w].right].red = false;
            nodes_[w].red = true;
            rotate_left(w);
            w = nodes_[p].left;
          }
          nodes_[w].red = nodes_[p].red;
          nodes_[p].red = false;
          nodes_[nodes_[w].left].red = false;
          rotate_right(p);
          x = root_;
        }
      }
    }
    nodes_[x].red = false;
  }

  void audit(Handle v, Handle lo, Handle hi, int blacks, int& black_height, std::size_t& count,
             bool check_order) const {
    if (v == nil) {
      if (black_height == -1)
        black_height = blacks;
      else if (black_height != blacks)
        throw StructuralError("unequal black heights");
      return;
    }
    ++count;
    const Node& nd = nodes_[v];
    if (!nd.in_tree) throw StructuralError("freed node reachable");
    if (nd.red && (nodes_[nd.left].red || nodes_[nd.right].red))
      throw StructuralError("red node with red child");
    if (nd.left != nil && nodes_[nd.left].parent != v) throw StructuralError("left parent link");
    if (nd.right != nil && nodes_[nd.right].parent != v) throw StructuralError("right parent link");
    if (nd.lo != lo || nd.hi != hi) throw StructuralError("stale bound link");
    if (nd.parent != nil && nd.lo != nd.parent && nd.hi != nd.parent)
      throw StructuralError("no bound equals parent");
    if (check_order) {
      if (lo != kLoInf && cmp_(nodes_[lo].key, nd.key) != Sign::negative)
        throw StructuralError("key not above lo bound");
      if (hi != kHiInf && cmp_(nd.key, nodes_[hi].key) != Sign::negative)
        throw StructuralError("key not below hi bound");
    }
    const int b = blacks + (nd.red ? 0 : 1);
    audit(nd.left, lo, v, b, black_height, count, check_order);
    audit(nd.right, v, hi, b, black_height, count, check_order);
  }

  Cmp cmp_;
  std::vector<Node> nodes_;
  std::vector<Handle> free_;
  Handle root_ = nil;
  Handle min_ = nil;
  std::size_t size_ = 0;
};

// Sorts by inserting every item into a noisy tree and reading the in-order
// sequence: O(n log n) noisy comparisons, correct w.p. >= 1 - n * epsilon.
template <class T, class Cmp>
std::vector<T> noisy_sort(const std::vector<T>& items, Cmp cmp, NoisyContext& ctx,
                          const NoisyTreeConfig& cfg, WalkStats* stats = nullptr) {
  NoisyTree<T, Cmp> tree(cmp);
  for (const T& item : items) tree.insert(item, ctx, cfg, stats);
  return tree.in_order_keys();
}

// Trivial-repetition baseline: bottom-up merge sort where every comparison is
// majority-amplified, costing an extra log factor. Merge is safe even when a
// comparison misfires, unlike std::sort with an inconsistent comparator.
template <class T, class Cmp>
std::vector<T> repetition_sort(const std::vector<T>& items, Cmp cmp, NoisyContext& ctx,
                               const RepetitionPlan& plan) {
  std::vector<T> cur = items;
  std::vector<T> tmp(cur.size());
  for (std::size_t width = 1; width < cur.size(); width *= 2) {
    for (std::size_t lo = 0; lo < cur.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, cur.size());
      const std::size_t hi = std::min(lo + 2 * width, cur.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        const bool take_left = majority_vote(
            ctx, [&] { return cmp(cur[i], cur[j]) == Sign::negative; }, plan);
        tmp[k++] = take_left ? cur[i++] : cur[j++];
      }
      while (i < mid) tmp[k++] = cur[i++];
      while (j < hi) tmp[k++] = cur[j++];
    }
    std::swap(cur, tmp);
  }
  return cur;
}

}  // namespace ngeo
