#include "ngeo/instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ngeo/predicates.hpp"
#include "ngeo/rational.hpp"

namespace ngeo {

namespace {

constexpr int kRejectionBudget = 10000;

struct PairHash {
  std::size_t operator()(const std::pair<i64, i64>& p) const {
    return std::hash<u64>()(u64(p.first) * 0x9e3779b97f4a7c15ULL ^ u64(p.second));
  }
};

// Canonical direction of the vector a -> b: gcd-reduced, sign-normalized so
// that opposite vectors map to the same key.
std::pair<i64, i64> canonical_direction(Point2 a, Point2 b) {
  i64 dx = b.x - a.x, dy = b.y - a.y;
  const i64 g = std::gcd(std::abs(dx), std::abs(dy));
  if (g > 0) {
    dx /= g;
    dy /= g;
  }
  if (dx < 0 || (dx == 0 && dy < 0)) {
    dx = -dx;
    dy = -dy;
  }
  return {dx, dy};
}

bool point_on_segment(Point2 p, const Segment2& s) {
  if (orient2d(s.a, s.b, p) != Sign::zero) return false;
  return p.x >= std::min(s.a.x, s.b.x) && p.x <= std::max(s.a.x, s.b.x) &&
         p.y >= std::min(s.a.y, s.b.y) && p.y <= std::max(s.a.y, s.b.y);
}

// True when the segments share no point at all.
bool segments_disjoint(const Segment2& s, const Segment2& t) {
  if (properly_cross(s, t)) return false;
  return !point_on_segment(t.a, s) && !point_on_segment(t.b, s) && !point_on_segment(s.a, t) &&
         !point_on_segment(s.b, t);
}

i64 uniform_coord(std::mt19937_64& rng, i64 bound) {
  return i64(rng() % (u64(2 * bound + 1))) - bound;
}

std::vector<Point2> gen_points_distinct(u32 n, std::mt19937_64& rng) {
  std::vector<Point2> pts;
  std::unordered_set<std::pair<i64, i64>, PairHash> used;
  pts.reserve(n);
  int attempts = 0;
  while (pts.size() < n) {
    if (++attempts >= kRejectionBudget)
      throw GenerationBudgetExceeded("points-uniform: rejection budget exhausted");
    const Point2 p{uniform_coord(rng, kCoordBound), uniform_coord(rng, kCoordBound)};
    if (!used.insert({p.x, p.y}).second) continue;
    pts.push_back(p);
    attempts = 0;
  }
  return pts;
}

// Collinear triples and tied closest pairs are rare on the integer grid, so
// the whole instance is resampled until the exact validators accept it.
std::vector<Point2> gen_points_with_unique_closest(u32 n, std::mt19937_64& rng) {
  for (int round = 0; round < 64; ++round) {
    std::vector<Point2> pts = gen_points_distinct(n, rng);
    try {
      validate_points_general_position(pts);
      if (n >= 2) validate_unique_closest_pair(pts);
      return pts;
    } catch (const Error&) {
      continue;
    }
  }
  throw GenerationBudgetExceeded("points-uniform: rejection rounds exhausted");
}

std::vector<Point2> gen_sorted_adversarial(u32 n, std::mt19937_64& rng) {
  std::vector<Point2> pts(n);
  const i64 span = 2 * kCoordBound;
  const i64 step = std::max<i64>(1, span / std::max<u32>(n, 1));
  for (u32 i = 0; i < n; ++i) {
    const i64 base = -kCoordBound + i64(i) * step;
    const i64 jitter = step > 1 ? i64(rng() % u64(step)) : 0;
    pts[i] = {std::min<i64>(base + jitter, kCoordBound), uniform_coord(rng, kCoordBound)};
  }
  for (u32 i = 1; i < n; ++i)
    if (pts[i].x <= pts[i - 1].x) pts[i].x = pts[i - 1].x + 1;
  if (n > 0 && pts[n - 1].x > kCoordBound)
    throw GenerationBudgetExceeded("sorted-adversarial: grid too small for n");
  return pts;
}

Segment2 orient_left_right(Point2 a, Point2 b) { return a.x < b.x ? Segment2{a, b} : Segment2{b, a}; }

std::vector<Segment2> gen_segments(u32 n, std::mt19937_64& rng, bool allow_crossings) {
  // Length scale: non-crossing wants short segments for packing; crossing
  // wants roughly k ~ 2.5 n, which the 1/sqrt(n) scaling delivers.
  double scale = allow_crossings ? 3.4 / std::sqrt(double(std::max<u32>(n, 2)))
                                 : 1.2 / std::sqrt(double(std::max<u32>(n, 2)));
  for (int round = 0; round < 6; ++round) {
    std::vector<Segment2> segs;
    std::unordered_set<i64> xs;
    const i64 len = std::max<i64>(2, i64(2.0 * kCoordBound * scale));
    int consecutive_failures = 0;
    while (segs.size() < n) {
      if (consecutive_failures >= kRejectionBudget) break;
      const Point2 a{uniform_coord(rng, kCoordBound), uniform_coord(rng, kCoordBound)};
      const i64 dx = 1 + i64(rng() % u64(len));
      const i64 dy = i64(rng() % u64(2 * len + 1)) - len;
      const Point2 b{a.x + dx, a.y + dy};
      if (!in_coord_range(b)) {
        ++consecutive_failures;
        continue;
      }
      const Segment2 s = orient_left_right(a, b);
      if (xs.count(s.a.x) || xs.count(s.b.x) || s.a.x == s.b.x) {
        ++consecutive_failures;
        continue;
      }
      bool ok = true;
      for (const Segment2& t : segs) {
        if (allow_crossings) {
          // Endpoint contacts and overlaps stay forbidden; proper crossings
          // are the point of this kind.
          if (!properly_cross(s, t) && !segments_disjoint(s, t)) {
            ok = false;
            break;
          }
        } else if (!segments_disjoint(s, t)) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        ++consecutive_failures;
        continue;
      }
      consecutive_failures = 0;
      xs.insert(s.a.x);
      xs.insert(s.b.x);
      segs.push_back(s);
    }
    if (segs.size() == n) {
      if (!allow_crossings) return segs;
      // Crossing instances additionally need all event abscissae distinct.
      try {
        validate_crossing_instance(segs);
        return segs;
      } catch (const Error&) {
        continue;  // resample; collisions of crossing abscissae are rare
      }
    }
    scale *= 0.6;  // rescale and retry with shorter segments
  }
  throw GenerationBudgetExceeded("segment generation failed after rescaling");
}

}  // namespace

const char* kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::points_uniform: return "points-uniform";
    case InstanceKind::segments_noncrossing: return "segments-noncrossing";
    case InstanceKind::segments_crossing: return "segments-crossing";
    case InstanceKind::sorted_adversarial: return "sorted-adversarial";
  }
  throw Error("unknown instance kind");
}

InstanceKind parse_kind(const std::string& name) {
  if (name == "points-uniform") return InstanceKind::points_uniform;
  if (name == "segments-noncrossing") return InstanceKind::segments_noncrossing;
  if (name == "segments-crossing") return InstanceKind::segments_crossing;
  if (name == "sorted-adversarial") return InstanceKind::sorted_adversarial;
  throw Error("unknown instance kind: " + name);
}

bool kind_is_points(InstanceKind k) {
  return k == InstanceKind::points_uniform || k == InstanceKind::sorted_adversarial;
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "ngeo v1 " << kind_name(inst.kind) << ' ' << inst.n() << '\n';
  if (kind_is_points(inst.kind)) {
    for (const Point2& p : inst.points) out << p.x << ' ' << p.y << '\n';
  } else {
    for (const Segment2& s : inst.segments)
      out << s.a.x << ' ' << s.a.y << ' ' << s.b.x << ' ' << s.b.y << '\n';
  }
  return out.str();
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string magic, version, kind;
  u32 n = 0;
  if (!(in >> magic >> version >> kind >> n) || magic != "ngeo" || version != "v1")
    throw Error("instance parse: bad header");
  Instance inst;
  inst.kind = parse_kind(kind);
  if (kind_is_points(inst.kind)) {
    inst.points.resize(n);
    for (u32 i = 0; i < n; ++i) {
      if (!(in >> inst.points[i].x >> inst.points[i].y)) throw Error("instance parse: truncated");
      if (!in_coord_range(inst.points[i])) throw Error("instance parse: coordinate out of range");
    }
  } else {
    inst.segments.resize(n);
    for (u32 i = 0; i < n; ++i) {
      Segment2& s = inst.segments[i];
      if (!(in >> s.a.x >> s.a.y >> s.b.x >> s.b.y)) throw Error("instance parse: truncated");
      if (!in_coord_range(s.a) || !in_coord_range(s.b))
        throw Error("instance parse: coordinate out of range");
      if (s.a == s.b) throw Error("instance parse: degenerate segment");
    }
  }
  std::string extra;
  if (in >> extra) throw Error("instance parse: trailing data");
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << serialize_instance(inst);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

Instance generate_instance(InstanceKind kind, u32 n, u64 seed) {
  std::mt19937_64 rng(mix_seed(seed, 0xa11ce + (u64)kind));
  Instance inst;
  inst.kind = kind;
  switch (kind) {
    case InstanceKind::points_uniform:
      inst.points = gen_points_with_unique_closest(n, rng);
      validate_points_general_position(inst.points);
      break;
    case InstanceKind::sorted_adversarial:
      inst.points = gen_sorted_adversarial(n, rng);
      validate_distinct_x(inst.points);
      break;
    case InstanceKind::segments_noncrossing:
      inst.segments = gen_segments(n, rng, false);
      validate_noncrossing_segments(inst.segments);
      break;
    case InstanceKind::segments_crossing:
      inst.segments = gen_segments(n, rng, true);
      validate_crossing_instance(inst.segments);
      break;
  }
  return inst;
}

void validate_points_general_position(const std::vector<Point2>& pts) {
  std::unordered_set<std::pair<i64, i64>, PairHash> seen;
  for (const Point2& p : pts) {
    if (!in_coord_range(p)) throw GeneralPositionViolation("point outside coordinate bound");
    if (!seen.insert({p.x, p.y}).second) throw GeneralPositionViolation("duplicate point");
  }
  // A least-index anchor of any collinear triple sees two equal canonical
  // directions, so sorting each anchor's direction list finds all of them.
  std::vector<std::pair<i64, i64>> dirs;
  for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
    dirs.clear();
    dirs.reserve(pts.size() - i - 1);
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      dirs.push_back(canonical_direction(pts[i], pts[j]));
    std::sort(dirs.begin(), dirs.end());
    if (std::adjacent_find(dirs.begin(), dirs.end()) != dirs.end())
      throw GeneralPositionViolation("three collinear points");
  }
}

void validate_unique_closest_pair(const std::vector<Point2>& pts) {
  if (pts.size() < 2) throw TooFewPoints("closest pair needs two points");
  i128 best = -1;
  int count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const i128 d = squared_dist(pts[i], pts[j]);
      if (best < 0 || d < best) {
        best = d;
        count = 1;
      } else if (d == best) {
        ++count;
      }
    }
  if (count != 1) throw GeneralPositionViolation("minimum distance is not unique");
}

void validate_distinct_x(const std::vector<Point2>& pts) {
  std::unordered_set<i64> xs;
  for (const Point2& p : pts) {
    if (!in_coord_range(p)) throw GeneralPositionViolation("point outside coordinate bound");
    if (!xs.insert(p.x).second) throw GeneralPositionViolation("duplicate x coordinate");
  }
}

namespace {

// require_distinct_x: the trapezoid map needs all 2n endpoint abscissae
// distinct; the sweep only needs endpoints pairwise distinct as points and
// off other segments (events at equal x are independent there).
void validate_segment_basics(const std::vector<Segment2>& segs, bool require_distinct_x) {
  std::unordered_set<i64> xs;
  std::unordered_set<std::pair<i64, i64>, PairHash> pts;
  for (const Segment2& s : segs) {
    if (!in_coord_range(s.a) || !in_coord_range(s.b))
      throw GeneralPositionViolation("segment endpoint outside coordinate bound");
    if (s.a.x >= s.b.x)
      throw GeneralPositionViolation("segment endpoints must be stored left-to-right");
    if (require_distinct_x && (!xs.insert(s.a.x).second || !xs.insert(s.b.x).second))
      throw GeneralPositionViolation("duplicate endpoint x coordinate");
    if (!pts.insert({s.a.x, s.a.y}).second || !pts.insert({s.b.x, s.b.y}).second)
      throw GeneralPositionViolation("segments share an endpoint");
  }
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = 0; j < segs.size(); ++j)
      if (i != j &&
          (point_on_segment(segs[j].a, segs[i]) || point_on_segment(segs[j].b, segs[i])))
        throw GeneralPositionViolation("segment endpoint lies on another segment");
}

}  // namespace

void validate_noncrossing_segments(const std::vector<Segment2>& segs) {
  validate_segment_basics(segs, true);
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (!segments_disjoint(segs[i], segs[j])) throw CrossingSegments("segments intersect");
}

void validate_crossing_instance(const std::vector<Segment2>& segs) {
  validate_segment_basics(segs, false);
  // Crossing abscissae must be distinct from each other (which rules out
  // three segments through one point) and from every endpoint abscissa.
  std::vector<Rat> xs;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (properly_cross(segs[i], segs[j])) {
        const auto pt = line_crossing(segs[i], segs[j]);
        if (!pt) throw GeneralPositionViolation("crossing without a crossing point");
        xs.push_back(pt->first);
      }
  std::sort(xs.begin(), xs.end(),
            [](const Rat& a, const Rat& b) { return cmp(a, b) == Sign::negative; });
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (cmp(xs[i - 1], xs[i]) == Sign::zero)
      throw GeneralPositionViolation("two crossings share an x coordinate");
  for (const Rat& x : xs)
    for (const Segment2& s : segs)
      if (cmp(x, s.a.x) == Sign::zero || cmp(x, s.b.x) == Sign::zero)
        throw GeneralPositionViolation("crossing shares an x coordinate with an endpoint");
}

u32 count_crossings(const std::vector<Segment2>& segs) {
  u32 k = 0;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (properly_cross(segs[i], segs[j])) ++k;
  return k;
}

}  // namespace ngeo
