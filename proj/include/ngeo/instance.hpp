// Instance files, generation by rejection sampling with exact validation,
// and the general-position validators each algorithm relies on.
#pragma once

#include <string>
#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/noise.hpp"

namespace ngeo {

enum class InstanceKind {
  points_uniform,
  segments_noncrossing,
  segments_crossing,
  sorted_adversarial,
};

const char* kind_name(InstanceKind k);
InstanceKind parse_kind(const std::string& name);
bool kind_is_points(InstanceKind k);

struct Instance {
  InstanceKind kind = InstanceKind::points_uniform;
  std::vector<Point2> points;
  std::vector<Segment2> segments;

  u32 n() const {
    return kind_is_points(kind) ? (u32)points.size() : (u32)segments.size();
  }
  friend bool operator==(const Instance&, const Instance&) = default;
};

// Line-oriented text format: "ngeo v1 <kind> <n>" header, one record per
// line, integers space-separated. Round-trips bit-exactly.
std::string serialize_instance(const Instance&);
Instance parse_instance(const std::string& text);
void save_instance(const Instance&, const std::string& path);
Instance load_instance(const std::string& path);

// Deterministic per (kind, n, seed); throws GenerationBudgetExceeded when
// rejection sampling keeps failing even after rescaling.
Instance generate_instance(InstanceKind kind, u32 n, u64 seed);

// Exact GP validators; each throws GeneralPositionViolation (or
// CrossingSegments) describing the first violation found.
void validate_points_general_position(const std::vector<Point2>& pts);  // distinct, no 3 collinear
void validate_unique_closest_pair(const std::vector<Point2>& pts);
void validate_distinct_x(const std::vector<Point2>& pts);
void validate_noncrossing_segments(const std::vector<Segment2>& segs);
void validate_crossing_instance(const std::vector<Segment2>& segs);

// Exact pairwise crossing count (O(n^2)).
u32 count_crossings(const std::vector<Segment2>& segs);

}  // namespace ngeo
