#include "ngeo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "ngeo/closest_pair.hpp"
#include "ngeo/delaunay.hpp"
#include "ngeo/exact_oracles.hpp"
#include "ngeo/hull2d.hpp"
#include "ngeo/predicates.hpp"
#include "ngeo/rbtree.hpp"
#include "ngeo/sweep.hpp"
#include "ngeo/synthetic.hpp"
#include "ngeo/trapezoid_map.hpp"

namespace ngeo {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Reference {
  std::vector<u32> sorted_order;
  std::vector<Point2> hull;
  std::vector<CrossingRecord> crossings;
  std::pair<u32, u32> closest{0, 0};
  std::vector<std::array<u32, 3>> dt_triples;
  i128 mst_weight = 0;
};

struct LexIdxCmp {
  const std::vector<Point2>* pts;
  Sign operator()(u32 a, u32 b) const {
    const Sign s = compare_xy((*pts)[a], (*pts)[b]);
    if (s != Sign::zero) return s;
    return a == b ? Sign::zero : (a < b ? Sign::negative : Sign::positive);
  }
};

Reference make_reference(const ExperimentConfig& cfg, const Instance& inst) {
  Reference ref;
  switch (cfg.algo) {
    case Algo::walk:
    case Algo::bst_ops:
    case Algo::trapezoid:
      break;  // verified per trial (replay or model)
    case Algo::sort: {
      ref.sorted_order.resize(inst.points.size());
      for (u32 i = 0; i < inst.points.size(); ++i) ref.sorted_order[i] = i;
      std::sort(ref.sorted_order.begin(), ref.sorted_order.end(), [&](u32 a, u32 b) {
        return LexIdxCmp{&inst.points}(a, b) == Sign::negative;
      });
      break;
    }
    case Algo::hull:
      ref.hull = exact_hull_gift_wrap(inst.points);
      break;
    case Algo::sweep:
      ref.crossings = brute_force_crossings(inst.segments);
      break;
    case Algo::closest_pair:
      ref.closest = brute_force_closest_pair(inst.points);
      break;
    case Algo::delaunay:
    case Algo::emst: {
      NoisyContext exact_ctx(0.0, cfg.seed, ~u64(0));
      DelaunayConfig dcfg;
      dcfg.c = cfg.c;
      const auto dt = DelaunayTriangulation::build(inst.points, exact_ctx, dcfg);
      ref.dt_triples = dt.result_triangles();
      if (!delaunay_triangles_valid(inst.points, ref.dt_triples))
        throw Error("reference triangulation failed the empty-circumcircle oracle");
      if (cfg.algo == Algo::emst)
        ref.mst_weight = edges_total_weight(inst.points, exact_complete_mst(inst.points));
      break;
    }
  }
  return ref;
}

Point2 random_box_point(std::mt19937_64& rng, i64 bound) {
  return {i64(rng() % (2 * u64(bound) + 1)) - bound, i64(rng() % (2 * u64(bound) + 1)) - bound};
}

TrialResult run_trial(const ExperimentConfig& cfg, const Instance& inst, const Reference& ref,
                      u32 trial) {
  TrialResult out;
  const auto t0 = std::chrono::steady_clock::now();
  WalkStats stats;
  try {
    NoisyContext ctx(cfg.p, cfg.seed, trial + 1);
    switch (cfg.algo) {
      case Algo::walk: {
        const u32 length = std::max<u32>(cfg.n, 2) + 1;
        WalkConfig wc;
        wc.epsilon = std::pow(double(std::max<u32>(cfg.n, 2)), -cfg.c);
        wc.path_hint = cfg.n;
        const double pe = cfg.p;
        WalkOutcome wo;
        if (pe < 1.0 / 16.0) {
          AdversarialPathOracle oracle(length, pe, cfg.seed, trial + 1);
          wo = run_walk(PathDag{length}, oracle, 0, wc);
        } else {
          AdversarialPathOracle raw(length, pe, cfg.seed, trial + 1);
          AmplifiedOracle<AdversarialPathOracle> oracle(raw, pe, 1.0 / 16.0);
          wo = run_walk(PathDag{length}, oracle, 0, wc);
        }
        stats.merge(wo.stats);
        out.primitive_calls = wo.stats.consultations;
        out.success = wo.terminal == length - 1;
        break;
      }
      case Algo::sort: {
        const u32 n = (u32)inst.points.size();
        const auto tcfg =
            make_tree_config(cfg.p, std::pow(double(std::max<u32>(n, 2)), -cfg.c));
        std::vector<u32> ids(n);
        for (u32 i = 0; i < n; ++i) ids[i] = i;
        const auto sorted = noisy_sort(ids, LexIdxCmp{&inst.points}, ctx, tcfg, &stats);
        out.primitive_calls = ctx.calls();
        out.success = sorted == ref.sorted_order;
        break;
      }
      case Algo::bst_ops: {
        const u32 n = (u32)inst.points.size();
        const auto tcfg =
            make_tree_config(cfg.p, std::pow(double(std::max<u32>(n, 2)), -cfg.c));
        NoisyTree<u32, LexIdxCmp> tree(LexIdxCmp{&inst.points});
        std::mt19937_64 ops(mix_seed(cfg.seed ^ 0xb57ULL, trial));
        auto lex_less = [&](u32 a, u32 b) {
          return LexIdxCmp{&inst.points}(a, b) == Sign::negative;
        };
        std::set<u32, decltype(lex_less)> model(lex_less);
        std::vector<std::pair<u32, NoisyTree<u32, LexIdxCmp>::Handle>> live;
        for (u32 i = 0; i < n; ++i) {
          const auto h = tree.insert(i, ctx, tcfg, &stats);
          model.insert(i);
          live.push_back({i, h});
          if (live.size() > 4 && ops() % 3 == 0) {
            const std::size_t victim = ops() % live.size();
            tree.erase(live[victim].second);
            model.erase(live[victim].first);
            live.erase(live.begin() + victim);
          }
        }
        out.primitive_calls = ctx.calls();
        const auto keys = tree.in_order_keys();
        out.success = keys == std::vector<u32>(model.begin(), model.end());
        break;
      }
      case Algo::trapezoid: {
        TrapConfig tcfg;
        tcfg.c = cfg.c;
        tcfg.instrumented = cfg.instrumented;
        const auto noisy = TrapezoidMap::build(inst.segments, ctx, tcfg, &stats);
        out.primitive_calls = ctx.calls();
        NoisyContext replay(0.0, cfg.seed, trial + 1);
        const auto exact = TrapezoidMap::build(inst.segments, replay, tcfg);
        out.success = noisy.canonical_leaves() == exact.canonical_leaves() &&
                      noisy.leaf_count() <= 3 * inst.segments.size() + 1;
        if (cfg.queries > 0) {
          std::mt19937_64 qrng(mix_seed(cfg.seed ^ 0x9e7ULL, trial));
          for (u32 q = 0; q < cfg.queries; ++q) {
            Point2 pt;
            while (true) {
              pt = random_box_point(qrng, kCoordBound);
              bool clean = true;
              for (const Segment2& s : inst.segments) {
                if (pt.x == s.a.x || pt.x == s.b.x) clean = false;
                if (s.a.x < pt.x && pt.x < s.b.x &&
                    height_vs_y_at(s, pt.x, pt.y) == Sign::zero)
                  clean = false;
              }
              if (clean) break;
            }
            try {
              if (noisy.locate(pt, ctx, &stats) != noisy.exact_locate(pt)) ++out.query_failures;
            } catch (const Error&) {
              ++out.query_failures;
            }
          }
          out.primitive_calls = ctx.calls();
        }
        break;
      }
      case Algo::sweep: {
        SweepConfig scfg;
        scfg.c = cfg.c;
        const auto res = intersect_segments(inst.segments, ctx, scfg, cfg.emit_trapezoids);
        stats.merge(res.stats);
        out.primitive_calls = ctx.calls();
        out.success = res.crossings.size() == ref.crossings.size();
        if (out.success)
          for (std::size_t i = 0; i < res.crossings.size(); ++i)
            if (!(res.crossings[i] == ref.crossings[i])) {
              out.success = false;
              break;
            }
        break;
      }
      case Algo::closest_pair: {
        ClosestPairConfig ccfg;
        ccfg.c = cfg.c;
        const auto pair = closest_pair(inst.points, ctx, ccfg, &stats);
        out.primitive_calls = ctx.calls();
        out.success = pair == ref.closest;
        break;
      }
      case Algo::hull: {
        HullConfig hcfg;
        hcfg.c = cfg.c;
        const auto hull = convex_hull_2d(inst.points, ctx, hcfg, &stats);
        out.primitive_calls = ctx.calls();
        out.success = hull == ref.hull;
        if (out.success &&
            (!polygon_is_convex_ccw(hull) || !polygon_contains_all(hull, inst.points)))
          out.success = false;  // exact post-checks
        break;
      }
      case Algo::delaunay: {
        DelaunayConfig dcfg;
        dcfg.c = cfg.c;
        dcfg.instrumented = cfg.instrumented;
        const auto dt = DelaunayTriangulation::build(inst.points, ctx, dcfg, &stats);
        out.primitive_calls = ctx.calls();
        const auto triples = dt.result_triangles();
        out.success =
            triples == ref.dt_triples && delaunay_triangles_valid(inst.points, triples);
        break;
      }
      case Algo::emst: {
        DelaunayConfig dcfg;
        dcfg.c = cfg.c;
        const auto mst = euclidean_mst(inst.points, ctx, dcfg, &stats);
        out.primitive_calls = ctx.calls();
        out.success = edges_form_spanning_tree((u32)inst.points.size(), mst) &&
                      edges_total_weight(inst.points, mst) == ref.mst_weight;
        break;
      }
    }
  } catch (const Error& e) {
    out.success = false;
    out.error = e.what();
  }
  out.consultations = stats.consultations;
  out.traversal_steps = stats.traversal_steps;
  out.stay_pushes = stats.stay_pushes;
  out.retries = stats.retries;
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

ExperimentReport run_impl(const ExperimentConfig& cfg, bool parallel) {
  if (cfg.trials < 1) throw Error("trials must be at least 1");
  if (!(cfg.p >= 0.0) || cfg.p >= 0.5) throw InvalidNoiseLevel("p must lie in [0, 1/2)");
  ExperimentReport report;
  report.cfg = cfg;
  report.kind = default_kind(cfg.algo);

  Instance inst;
  if (cfg.algo != Algo::walk) {
    inst = cfg.instance_file.empty() ? generate_instance(report.kind, cfg.n, cfg.seed)
                                     : load_instance(cfg.instance_file);
    report.kind = inst.kind;
    report.instance_n = inst.n();
    if (cfg.algo == Algo::sweep) report.crossing_count = count_crossings(inst.segments);
  } else {
    report.instance_n = cfg.n;
  }
  const Reference ref = make_reference(cfg, inst);

  report.trials.resize(cfg.trials);
#ifdef _OPENMP
  if (parallel && cfg.threads != 1) {
    if (cfg.threads > 1) omp_set_num_threads(cfg.threads);
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < (long long)cfg.trials; ++t)
      report.trials[t] = run_trial(cfg, inst, ref, (u32)t);
    return report;
  }
#else
  (void)parallel;
#endif
  for (u32 t = 0; t < cfg.trials; ++t) report.trials[t] = run_trial(cfg, inst, ref, t);
  return report;
}

double percentile95(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t idx = std::min(v.size() - 1, (std::size_t)std::ceil(0.95 * v.size()) - 0);
  return v[std::min(idx, v.size() - 1)];
}

}  // namespace

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::walk: return "walk";
    case Algo::sort: return "sort";
    case Algo::bst_ops: return "bst";
    case Algo::trapezoid: return "trapezoid";
    case Algo::sweep: return "sweep";
    case Algo::closest_pair: return "closest-pair";
    case Algo::hull: return "hull";
    case Algo::delaunay: return "delaunay";
    case Algo::emst: return "emst";
  }
  throw Error("unknown algorithm");
}

Algo parse_algo(const std::string& name) {
  for (Algo a : {Algo::walk, Algo::sort, Algo::bst_ops, Algo::trapezoid, Algo::sweep,
                 Algo::closest_pair, Algo::hull, Algo::delaunay, Algo::emst})
    if (name == algo_name(a)) return a;
  throw Error("unknown algorithm: " + name);
}

InstanceKind default_kind(Algo a) {
  switch (a) {
    case Algo::sort:
    case Algo::bst_ops:
      return InstanceKind::sorted_adversarial;
    case Algo::trapezoid:
      return InstanceKind::segments_noncrossing;
    case Algo::sweep:
      return InstanceKind::segments_crossing;
    default:
      return InstanceKind::points_uniform;
  }
}

double ExperimentReport::success_rate() const {
  if (trials.empty()) return 0;
  std::size_t ok = 0;
  for (const TrialResult& t : trials) ok += t.success;
  return double(ok) / double(trials.size());
}

double ExperimentReport::mean_calls() const {
  double sum = 0;
  for (const TrialResult& t : trials) sum += double(t.primitive_calls);
  return trials.empty() ? 0 : sum / double(trials.size());
}

double ExperimentReport::p95_calls() const {
  std::vector<double> v;
  for (const TrialResult& t : trials) v.push_back(double(t.primitive_calls));
  return percentile95(std::move(v));
}

double ExperimentReport::mean_consultations() const {
  double sum = 0;
  for (const TrialResult& t : trials) sum += double(t.consultations);
  return trials.empty() ? 0 : sum / double(trials.size());
}

double ExperimentReport::p95_consultations() const {
  std::vector<double> v;
  for (const TrialResult& t : trials) v.push_back(double(t.consultations));
  return percentile95(std::move(v));
}

u64 ExperimentReport::total_query_failures() const {
  u64 sum = 0;
  for (const TrialResult& t : trials) sum += t.query_failures;
  return sum;
}

double ExperimentReport::calls_per_nlogn() const {
  const double n = std::max<double>(2.0, double(instance_n));
  const double work = cfg.algo == Algo::sweep ? n + double(crossing_count) : n;
  return mean_calls() / (work * std::log2(n));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) { return run_impl(cfg, true); }

ExperimentReport run_experiment_serial(const ExperimentConfig& cfg) {
  return run_impl(cfg, false);
}

std::string report_csv(const ExperimentReport& report, bool include_timing) {
  std::ostringstream out;
  out << "trial,success,primitive_calls,consultations,traversal_steps,stay_pushes,retries,"
         "query_failures,error";
  if (include_timing) out << ",wall_ms";
  out << '\n';
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const TrialResult& t = report.trials[i];
    std::string err = t.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    out << i << ',' << (t.success ? 1 : 0) << ',' << t.primitive_calls << ',' << t.consultations
        << ',' << t.traversal_steps << ',' << t.stay_pushes << ',' << t.retries << ','
        << t.query_failures << ',' << err;
    if (include_timing) out << ',' << t.wall_ms;
    out << '\n';
  }
  return out.str();
}

std::string report_json(const ExperimentReport& report, bool include_timing) {
  ordered_json j;
  j["config"] = {{"algo", algo_name(report.cfg.algo)},
                 {"n", report.cfg.n},
                 {"p", report.cfg.p},
                 {"c", report.cfg.c},
                 {"seed", report.cfg.seed},
                 {"trials", report.cfg.trials},
                 {"instance_file", report.cfg.instance_file},
                 {"emit_trapezoids", report.cfg.emit_trapezoids},
                 {"instrumented", report.cfg.instrumented},
                 {"queries", report.cfg.queries}};
  j["instance"] = {{"kind", kind_name(report.kind)},
                   {"n", report.instance_n},
                   {"crossings", report.crossing_count}};
  j["aggregates"] = {{"success_rate", report.success_rate()},
                     {"calls_mean", report.mean_calls()},
                     {"calls_p95", report.p95_calls()},
                     {"consultations_mean", report.mean_consultations()},
                     {"consultations_p95", report.p95_consultations()},
                     {"calls_per_nlogn", report.calls_per_nlogn()},
                     {"query_failures", report.total_query_failures()},
                     {"queries_total", report.total_queries()}};
  if (include_timing) {
    double total = 0;
    for (const TrialResult& t : report.trials) total += t.wall_ms;
    j["timing"] = {{"total_ms", total},
                   {"mean_trial_ms", report.trials.empty() ? 0 : total / report.trials.size()}};
  }
  return j.dump(2) + "\n";
}

EpsilonScalingResult walk_epsilon_scaling(u32 path_len, u32 dag_n, const std::vector<double>& cs,
                                          u32 trials, u64 seed) {
  EpsilonScalingResult out;
  const u32 length = path_len + 1;
  for (double c : cs) {
    WalkConfig wc;
    wc.epsilon = std::pow(double(dag_n), -c);
    wc.path_hint = path_len;
    double sum = 0;
    for (u32 t = 0; t < trials; ++t) {
      AdversarialPathOracle oracle(length, 1.0 / 16.0, seed ^ (u64)std::llround(c * 1024), t);
      const WalkOutcome wo = run_walk(PathDag{length}, oracle, 0, wc);
      sum += double(wo.stats.consultations);
    }
    out.points.push_back({c, c * std::log2(double(dag_n)), sum / trials});
  }
  // Least-squares line through (log2(1/eps), mean consultations).
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double m = double(out.points.size());
  for (const auto& pt : out.points) {
    sx += pt.log2_inv_eps;
    sy += pt.mean_consultations;
    sxx += pt.log2_inv_eps * pt.log2_inv_eps;
    sxy += pt.log2_inv_eps * pt.mean_consultations;
    syy += pt.mean_consultations * pt.mean_consultations;
  }
  const double denom = m * sxx - sx * sx;
  out.slope = denom == 0 ? 0 : (m * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  for (const auto& pt : out.points) {
    const double fit = out.intercept + out.slope * pt.log2_inv_eps;
    ss_res += (pt.mean_consultations - fit) * (pt.mean_consultations - fit);
    ss_tot += (pt.mean_consultations - sy / m) * (pt.mean_consultations - sy / m);
  }
  out.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return out;
}

std::vector<SizeScalingPoint> size_scaling(Algo algo, const std::vector<u32>& ns, double p,
                                           double c, u64 seed, u32 trials) {
  std::vector<SizeScalingPoint> out;
  for (u32 n : ns) {
    ExperimentConfig cfg;
    cfg.algo = algo;
    cfg.n = n;
    cfg.p = p;
    cfg.c = c;
    cfg.seed = seed + n;
    cfg.trials = trials;
    const ExperimentReport rep = run_experiment(cfg);
    SizeScalingPoint pt;
    pt.n = n;
    pt.mean_calls = rep.mean_calls();
    pt.ratio = rep.calls_per_nlogn();
    if (algo == Algo::delaunay || algo == Algo::trapezoid) {
      // Structure size per input element, averaged over a few builds.
      double nodes = 0;
      const u32 reps = std::min<u32>(trials, 3);
      const Instance inst = generate_instance(default_kind(algo), n, cfg.seed);
      for (u32 t = 0; t < reps; ++t) {
        NoisyContext ctx(p, cfg.seed, t + 1);
        if (algo == Algo::delaunay) {
          DelaunayConfig dcfg;
          dcfg.c = c;
          nodes += double(DelaunayTriangulation::build(inst.points, ctx, dcfg).node_count());
        } else {
          TrapConfig tcfg;
          tcfg.c = c;
          nodes += double(TrapezoidMap::build(inst.segments, ctx, tcfg).node_count());
        }
      }
      pt.aux = nodes / reps / double(n);
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace ngeo
