#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ngeo/exact_oracles.hpp"
#include "ngeo/instance.hpp"
#include "ngeo/trapezoid_map.hpp"

using namespace ngeo;

namespace {

TrapConfig instrumented_cfg() {
  TrapConfig cfg;
  cfg.instrumented = true;
  return cfg;
}

// Random query point avoiding walls and segments of the instance.
Point2 random_query(const std::vector<Segment2>& segs, std::mt19937_64& rng) {
  while (true) {
    const Point2 q{i64(rng() % (2 * u64(kCoordBound) + 1)) - kCoordBound,
                   i64(rng() % (2 * u64(kCoordBound) + 1)) - kCoordBound};
    bool clean = true;
    for (const Segment2& s : segs) {
      if (q.x == s.a.x || q.x == s.b.x || (q == s.a) || (q == s.b)) clean = false;
      if (s.a.x < q.x && q.x < s.b.x && height_vs_y_at(s, q.x, q.y) == Sign::zero) clean = false;
    }
    if (clean) return q;
  }
}

TrapDescription leaf_description(const TrapezoidMap& map, u32 id) {
  const TrapNode& nd = map.node(id);
  return {nd.top, nd.bottom, nd.leftp, nd.rightp};
}

}  // namespace

TEST_CASE("zero segments: one leaf, the bounding box") {
  NoisyContext ctx(0.0, 1);
  const auto map = TrapezoidMap::build({}, ctx, instrumented_cfg());
  CHECK(map.leaf_count() == 1);
  const TrapNode& root = map.node(0);
  CHECK(root.leaf);
  CHECK(root.top == kTrapTopSentinel);
  CHECK(root.bottom == kTrapBottomSentinel);
  CHECK(map.locate({5, 5}, ctx) == 0);
}

TEST_CASE("one segment splits the box into four trapezoids") {
  NoisyContext ctx(0.0, 2);
  const std::vector<Segment2> segs{{{-100, 10}, {200, 40}}};
  const auto map = TrapezoidMap::build(segs, ctx, instrumented_cfg());
  CHECK(map.leaf_count() == 4);

  SUBCASE("locating a point above and left of both endpoints hits the left slab") {
    const Point2 q{-5000, 500};
    const u32 leaf = map.locate(q, ctx);
    const TrapNode& nd = map.node(leaf);
    CHECK(nd.rightp == Point2{-100, 10});  // left slab ends at the left endpoint
    CHECK(nd.top == kTrapTopSentinel);
    CHECK(nd.bottom == kTrapBottomSentinel);
  }

  SUBCASE("the four-case enumeration against the direct oracle") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
      const Point2 q = random_query(segs, rng);
      const u32 leaf = map.exact_locate(q);
      CHECK(leaf_description(map, leaf) == exact_trapezoid_at(segs, q));
    }
  }
}

TEST_CASE("exact construction matches the direct geometric oracle") {
  NoisyContext ctx(0.0, 4);
  const Instance inst = generate_instance(InstanceKind::segments_noncrossing, 60, 14);
  const auto map = TrapezoidMap::build(inst.segments, ctx, instrumented_cfg());
  CHECK(map.leaf_count() == 3 * inst.segments.size() + 1);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Point2 q = random_query(inst.segments, rng);
    const u32 leaf = map.exact_locate(q);
    CHECK(leaf_description(map, leaf) == exact_trapezoid_at(inst.segments, q));
  }
}

TEST_CASE("zero-noise walk location agrees with the exact locator") {
  NoisyContext ctx(0.0, 6);
  const Instance inst = generate_instance(InstanceKind::segments_noncrossing, 40, 15);
  const auto map = TrapezoidMap::build(inst.segments, ctx, instrumented_cfg());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Point2 q = random_query(inst.segments, rng);
    CHECK(map.locate(q, ctx) == map.exact_locate(q));
  }
}

TEST_CASE("construction is deterministic per stream") {
  const Instance inst = generate_instance(InstanceKind::segments_noncrossing, 30, 16);
  NoisyContext a(0.1, 77, 3), b(0.1, 77, 3);
  TrapConfig cfg;
  const auto ma = TrapezoidMap::build(inst.segments, a, cfg);
  const auto mb = TrapezoidMap::build(inst.segments, b, cfg);
  CHECK(ma.node_count() == mb.node_count());
  CHECK(ma.canonical_leaves() == mb.canonical_leaves());
  CHECK(a.calls() == b.calls());
}

TEST_CASE("noisy construction reproduces the zero-noise replay") {
  const Instance inst = generate_instance(InstanceKind::segments_noncrossing, 60, 17);
  TrapConfig cfg;
  int match = 0;
  for (int trial = 0; trial < 20; ++trial) {
    NoisyContext noisy(0.1, 808, trial);
    NoisyContext replay(0.0, 808, trial);
    const auto m1 = TrapezoidMap::build(inst.segments, noisy, cfg);
    CHECK(m1.leaf_count() <= 3 * inst.segments.size() + 1);
    const auto m0 = TrapezoidMap::build(inst.segments, replay, cfg);
    if (m1.canonical_leaves() == m0.canonical_leaves()) ++match;
  }
  CHECK(match >= 19);
}

TEST_CASE("noisy point location queries agree with the exact locator") {
  const Instance inst = generate_instance(InstanceKind::segments_noncrossing, 60, 18);
  NoisyContext ctx(0.1, 909);
  TrapConfig cfg;
  const auto map = TrapezoidMap::build(inst.segments, ctx, cfg);
  std::mt19937_64 rng(9);
  int wrong = 0;
  for (int i = 0; i < 500; ++i) {
    const Point2 q = random_query(inst.segments, rng);
    if (map.locate(q, ctx) != map.exact_locate(q)) ++wrong;
  }
  CHECK(wrong <= 1);
}

TEST_CASE("crossing segments are rejected before any noise") {
  NoisyContext ctx(0.1, 10);
  const std::vector<Segment2> segs{{{0, 0}, {100, 100}}, {{1, 90}, {99, 5}}};
  CHECK_THROWS_AS((void)TrapezoidMap::build(segs, ctx, TrapConfig{}), CrossingSegments);
}

TEST_CASE("queries outside the box are rejected") {
  NoisyContext ctx(0.0, 11);
  const auto map = TrapezoidMap::build({}, ctx, TrapConfig{});
  CHECK_THROWS_AS((void)map.locate({kBoxBound + 1, 0}, ctx), GeneralPositionViolation);
}
