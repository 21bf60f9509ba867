#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ngeo/closest_pair.hpp"
#include "ngeo/exact_oracles.hpp"
#include "ngeo/hull2d.hpp"
#include "ngeo/instance.hpp"

using namespace ngeo;

TEST_CASE("three CCW points are their own hull") {
  NoisyContext ctx(0.0, 1);
  const std::vector<Point2> pts{{0, 0}, {10, 1}, {3, 8}};
  const auto hull = convex_hull_2d(pts, ctx, HullConfig{});
  CHECK(hull == pts);
}

TEST_CASE("interior points are excluded") {
  NoisyContext ctx(0.0, 2);
  const std::vector<Point2> pts{{0, 0}, {4, 0}, {4, 3}, {0, 5}, {2, 2}};
  const auto hull = convex_hull_2d(pts, ctx, HullConfig{});
  const std::vector<Point2> want{{0, 0}, {4, 0}, {4, 3}, {0, 5}};
  CHECK(hull == want);
}

TEST_CASE("degenerate inputs are rejected") {
  NoisyContext ctx(0.0, 3);
  CHECK_THROWS_AS((void)convex_hull_2d({{0, 0}, {1, 1}}, ctx, HullConfig{}), TooFewPoints);
  CHECK_THROWS_AS((void)convex_hull_2d({{0, 0}, {1, 1}, {2, 2}, {5, 0}}, ctx, HullConfig{}),
                  GeneralPositionViolation);
}

TEST_CASE("exact hull equals gift wrapping with post-checks") {
  const Instance inst = generate_instance(InstanceKind::points_uniform, 300, 4);
  NoisyContext ctx(0.0, 4);
  const auto hull = convex_hull_2d(inst.points, ctx, HullConfig{});
  CHECK(hull == exact_hull_gift_wrap(inst.points));
  CHECK(polygon_is_convex_ccw(hull));
  CHECK(polygon_contains_all(hull, inst.points));
}

TEST_CASE("noisy hull equals the oracle in nearly all trials") {
  const Instance inst = generate_instance(InstanceKind::points_uniform, 400, 5);
  const auto want = exact_hull_gift_wrap(inst.points);
  int match = 0;
  for (int trial = 0; trial < 20; ++trial) {
    NoisyContext ctx(0.1, 321, trial);
    const auto hull = convex_hull_2d(inst.points, ctx, HullConfig{});
    if (hull == want) {
      ++match;
      CHECK(polygon_is_convex_ccw(hull));
      CHECK(polygon_contains_all(hull, inst.points));
    }
  }
  CHECK(match >= 19);
}

TEST_CASE("closest pair: documented examples") {
  NoisyContext ctx(0.0, 6);
  SUBCASE("three points") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {5, 5}};
    CHECK(closest_pair(pts, ctx, ClosestPairConfig{}) == std::pair<u32, u32>{0, 1});
  }
  SUBCASE("two points are their own pair") {
    const std::vector<Point2> pts{{0, 0}, {9, 9}};
    CHECK(closest_pair(pts, ctx, ClosestPairConfig{}) == std::pair<u32, u32>{0, 1});
  }
  SUBCASE("too few points") {
    CHECK_THROWS_AS((void)closest_pair({{0, 0}}, ctx, ClosestPairConfig{}), TooFewPoints);
  }
  SUBCASE("tied minimum distance is rejected") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {100, 0}, {101, 0}};
    CHECK_THROWS_AS((void)closest_pair(pts, ctx, ClosestPairConfig{}), GeneralPositionViolation);
  }
}

TEST_CASE("exact closest pair equals brute force") {
  const Instance inst = generate_instance(InstanceKind::points_uniform, 300, 7);
  NoisyContext ctx(0.0, 7);
  CHECK(closest_pair(inst.points, ctx, ClosestPairConfig{}) ==
        brute_force_closest_pair(inst.points));
}

TEST_CASE("noisy closest pair equals brute force in nearly all trials") {
  const Instance inst = generate_instance(InstanceKind::points_uniform, 256, 8);
  const auto want = brute_force_closest_pair(inst.points);
  int match = 0;
  for (int trial = 0; trial < 20; ++trial) {
    NoisyContext ctx(0.1, 654, trial);
    if (closest_pair(inst.points, ctx, ClosestPairConfig{}) == want) ++match;
  }
  CHECK(match >= 19);
}
