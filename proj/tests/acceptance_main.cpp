// Acceptance suite: one pass/fail line per criterion, exit code 0 only when
// every criterion holds at its stated tolerance.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ngeo/counterexample.hpp"
#include "ngeo/experiment.hpp"
#include "ngeo/instance.hpp"
#include "ngeo/predicates.hpp"
#include "ngeo/rbtree.hpp"
#include "ngeo/synthetic.hpp"
#include "ngeo/walk.hpp"

using namespace ngeo;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// 1. Path-guided walk: success, consultation budget, wrong-terminal rate.
void criterion1() {
  const u32 L = 32;
  const u32 length = L + 1;
  const double epsilon = 1e-3;
  const u32 trials = 100000;
  WalkConfig cfg;
  cfg.epsilon = epsilon;
  cfg.path_hint = L;
  u64 ok = 0, traversal = 0;
  for (u32 t = 0; t < trials; ++t) {
    AdversarialPathOracle oracle(length, 1.0 / 16.0, 0xC1, t);
    const WalkOutcome out = run_walk(PathDag{length}, oracle, 0, cfg);
    if (out.terminal == length - 1) ++ok;
    traversal += out.stats.traversal_steps;
  }
  const double success = double(ok) / trials;
  const double wrong = 1.0 - success;
  const double mean_traversal = double(traversal) / trials;
  const double anchor = 3.0 * (double(L) + std::log2(1.0 / epsilon));
  const bool pass = success >= 0.999 && mean_traversal <= anchor && wrong <= 1e-3;
  report(1, pass, "walk engine terminates at the target within budget",
         "success=" + fmt(success) + " mean_traversal=" + fmt(mean_traversal) +
             " anchor=" + fmt(anchor) + " wrong_rate=" + fmt(wrong));
}

// 2. Tree corollary: every successful walk's stack is the exact root path.
void criterion2() {
  const CompleteTreeDag tree{10};
  WalkConfig cfg;
  cfg.epsilon = 1e-4;
  cfg.path_hint = 10;
  const u32 trials = 10000;
  u32 successes = 0, violations = 0;
  const u32 first_leaf = 1u << 10;
  for (u32 t = 0; t < trials; ++t) {
    const WalkVertex target = first_leaf + (t % (1u << 10));
    TreeSearchOracle oracle(tree, target, 1.0 / 16.0, 0xC2, t);
    const WalkOutcome out = run_walk_on_tree(tree, oracle, 1, cfg);
    if (out.terminal != target) continue;
    ++successes;
    if (collapsed_path(out) != tree_root_path(target)) ++violations;
  }
  const bool pass = violations == 0 && successes > trials / 2;
  report(2, pass, "tree walks recover the exact root-to-target path",
         "successes=" + std::to_string(successes) + "/" + std::to_string(trials) +
             " path_violations=" + std::to_string(violations));
}

// 3. Noisy BST sorting: correctness at n=4096 and a flat calls/(n log2 n)
// ratio, against a repetition baseline whose ratio grows.
void criterion3() {
  ExperimentConfig cfg;
  cfg.algo = Algo::sort;
  cfg.n = 4096;
  cfg.p = 0.1;
  cfg.c = 2.0;
  cfg.seed = 0xC3;
  cfg.trials = 100;
  const auto rep = run_experiment(cfg);
  const bool sorted_ok = rep.success_rate() >= 0.99;

  const std::vector<u32> ns{512, 2048, 8192};
  const auto pts = size_scaling(Algo::sort, ns, 0.1, 2.0, 0xC3, 8);
  double lo = 1e18, hi = 0, sum = 0;
  for (const auto& pt : pts) {
    lo = std::min(lo, pt.ratio);
    hi = std::max(hi, pt.ratio);
    sum += pt.ratio;
  }
  const double mean = sum / pts.size();
  const bool flat = hi <= 1.25 * mean && lo >= 0.75 * mean;

  std::vector<double> base;
  for (u32 n : ns) {
    const Instance inst = generate_instance(InstanceKind::sorted_adversarial, n, 0xC3);
    const auto plan = repetitions_for(0.1, std::pow(double(n), -3.0));
    NoisyContext ctx(0.1, 0xC3, 1);
    std::vector<u32> ids(n);
    for (u32 i = 0; i < n; ++i) ids[i] = i;
    struct Cmp {
      const std::vector<Point2>* pts;
      Sign operator()(u32 a, u32 b) const { return compare_xy((*pts)[a], (*pts)[b]); }
    };
    (void)repetition_sort(ids, Cmp{&inst.points}, ctx, plan);
    base.push_back(double(ctx.calls()) / (double(n) * std::log2(double(n))));
  }
  const bool baseline_grows = base[0] < base[1] && base[1] < base[2];

  report(3, sorted_ok && flat && baseline_grows, "noisy BST sort: correct and log-flat",
         "success=" + fmt(rep.success_rate()) + " ratios=" + fmt(pts[0].ratio) + "/" +
             fmt(pts[1].ratio) + "/" + fmt(pts[2].ratio) + " baseline=" + fmt(base[0]) + "/" +
             fmt(base[1]) + "/" + fmt(base[2]));
}

// 4. Trapezoidal map: replay equality, leaf bound, query agreement.
void criterion4() {
  ExperimentConfig cfg;
  cfg.algo = Algo::trapezoid;
  cfg.n = 500;
  cfg.p = 0.1;
  cfg.c = 2.0;
  cfg.seed = 0xC4;
  cfg.trials = 100;
  cfg.queries = 10000;
  const auto rep = run_experiment(cfg);
  const double allowed_per_map = std::floor(double(cfg.queries) * std::pow(500.0, -2.0));
  u64 worst_map = 0;
  for (const auto& t : rep.trials) worst_map = std::max(worst_map, t.query_failures);
  const bool pass = rep.success_rate() >= 0.99 && worst_map <= (u64)allowed_per_map;
  report(4, pass, "trapezoidal map equals replay; queries match the exact locator",
         "success=" + fmt(rep.success_rate()) + " worst_map_query_failures=" +
             std::to_string(worst_map) + " allowed=" + fmt(allowed_per_map));
}

// 5. Sweep with crossings: oracle equality and a bounded work ratio across
// two instance scales.
void criterion5() {
  ExperimentConfig cfg;
  cfg.algo = Algo::sweep;
  cfg.n = 200;
  cfg.p = 0.1;
  cfg.c = 2.0;
  cfg.seed = 0xC5;
  cfg.trials = 100;
  const auto rep = run_experiment(cfg);

  ExperimentConfig big = cfg;
  big.n = 400;
  big.trials = 10;
  const auto rep2 = run_experiment(big);
  const double r1 = rep.calls_per_nlogn();
  const double r2 = rep2.calls_per_nlogn();
  const double spread = r2 / r1;
  const bool pass = rep.success_rate() >= 0.99 && spread >= 0.4 && spread <= 2.5;
  report(5, pass, "sweep reports all crossings; work stays near (n+k) log n",
         "success=" + fmt(rep.success_rate()) + " k=" + std::to_string(rep.crossing_count) +
             " ratio200=" + fmt(r1) + " ratio400=" + fmt(r2));
}

// 6. Closest pair equals brute force.
void criterion6() {
  ExperimentConfig cfg;
  cfg.algo = Algo::closest_pair;
  cfg.n = 1024;
  cfg.p = 0.1;
  cfg.c = 2.0;
  cfg.seed = 0xC6;
  cfg.trials = 100;
  const auto rep = run_experiment(cfg);
  report(6, rep.success_rate() >= 0.99, "closest pair matches the all-pairs oracle",
         "success=" + fmt(rep.success_rate()));
}

// 7. Static hull equals gift wrapping with exact post-checks.
void criterion7() {
  ExperimentConfig cfg;
  cfg.algo = Algo::hull;
  cfg.n = 2048;
  cfg.p = 0.1;
  cfg.c = 2.0;
  cfg.seed = 0xC7;
  cfg.trials = 100;
  const auto rep = run_experiment(cfg);
  report(7, rep.success_rate() >= 0.99, "hull equals the gift-wrapping oracle",
         "success=" + fmt(rep.success_rate()));
}

// 8. Delaunay: local-Delaunay validation, bounded DAG size, EMST equality.
void criterion8() {
  ExperimentConfig cfg;
  cfg.algo = Algo::delaunay;
  cfg.n = 512;
  cfg.p = 0.1;
  cfg.c = 2.0;
  cfg.seed = 0xC8;
  cfg.trials = 100;
  const auto rep = run_experiment(cfg);

  const auto pts = size_scaling(Algo::delaunay, {64, 128, 256, 512, 1024, 2048}, 0.1, 2.0, 0xC8, 3);
  double lo = 1e18, hi = 0;
  for (const auto& pt : pts) {
    lo = std::min(lo, pt.aux);
    hi = std::max(hi, pt.aux);
  }
  const bool dag_bounded = hi <= 20.0 && hi <= 2.5 * lo;

  ExperimentConfig em = cfg;
  em.algo = Algo::emst;
  const auto mst = run_experiment(em);

  const bool pass = rep.success_rate() >= 0.99 && dag_bounded && mst.success_rate() >= 0.99;
  report(8, pass, "delaunay passes exact validation; EMST matches; DAG stays linear",
         "dt_success=" + fmt(rep.success_rate()) + " nodes/n=[" + fmt(lo) + "," + fmt(hi) +
             "] emst_success=" + fmt(mst.success_rate()));
}

// 9. Generalized-walk counterexample: normalized cost in a constant band and
// beyond the path-guided budget at large n.
void criterion9() {
  double norm_lo = 1e18, norm_hi = 0;
  double mean_at_20 = 0;
  for (u32 h = 10; h <= 20; h += 2) {
    CounterexampleConfig cfg;
    cfg.log2_n = h;
    cfg.trials = 1500;
    cfg.seed = 0xC9;
    const auto res = run_counterexample(cfg);
    const double norm = res.mean_steps / (double(h) * h / std::log2(double(h)));
    norm_lo = std::min(norm_lo, norm);
    norm_hi = std::max(norm_hi, norm);
    if (h == 20) mean_at_20 = res.mean_steps;
  }
  const double budget20 = 3.0 * (20.0 + std::log2(std::pow(2.0, 20.0 * 2.0)));
  const bool pass = norm_hi <= 2.0 * norm_lo && mean_at_20 > budget20;
  report(9, pass, "generalized walk pays log^2/loglog, beating the Theorem-1 budget",
         "normalized=[" + fmt(norm_lo) + "," + fmt(norm_hi) + "] steps(2^20)=" + fmt(mean_at_20) +
             " budget=" + fmt(budget20));
}

// 10. Raising c adds consultations additively, with slope near 3*log2(e).
void criterion10() {
  const auto res = walk_epsilon_scaling(32, 1u << 10, {2.0, 2.5, 3.0, 3.5, 4.0}, 3000, 0xCA);
  const double target = 3.0 * std::log2(std::exp(1.0));
  const bool slope_ok = res.slope >= 0.7 * target && res.slope <= 1.3 * target;
  // Additive growth: the c=2 -> 4 increment is twice the c=2 -> 3 increment.
  const double d32 = res.points[2].mean_consultations - res.points[0].mean_consultations;
  const double d42 = res.points[4].mean_consultations - res.points[0].mean_consultations;
  const bool additive = std::abs(d42 / (2.0 * d32) - 1.0) <= 0.35 && res.r2 >= 0.9;
  report(10, slope_ok && additive, "epsilon scaling is additive with the predicted slope",
         "slope=" + fmt(res.slope) + " target=" + fmt(target) + " r2=" + fmt(res.r2) +
             " d(c2->3)=" + fmt(d32) + " d(c2->4)=" + fmt(d42));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures == 0)
    std::printf("acceptance: all 10 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
