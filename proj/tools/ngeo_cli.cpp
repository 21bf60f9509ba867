// Command-line harness: instance generation, seeded noisy experiments with
// exact verification, instance validation, the generalized-walk stress
// scenario, and scaling sweeps. Reports are CSV plus a JSON summary.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ngeo/counterexample.hpp"
#include "ngeo/exact_oracles.hpp"
#include "ngeo/experiment.hpp"
#include "ngeo/instance.hpp"

using namespace ngeo;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
}

int cmd_gen(const std::string& kind, u32 n, u64 seed, const std::string& out_path) {
  const Instance inst = generate_instance(parse_kind(kind), n, seed);
  if (out_path.empty())
    std::cout << serialize_instance(inst);
  else
    save_instance(inst, out_path);
  return 0;
}

int cmd_run(ExperimentConfig cfg, const std::string& out_prefix, bool serial) {
  const ExperimentReport report = serial ? run_experiment_serial(cfg) : run_experiment(cfg);
  const std::string csv = report_csv(report);
  const std::string json = report_json(report);
  if (out_prefix.empty()) {
    std::cout << json;
  } else {
    write_file(out_prefix + ".csv", csv);
    write_file(out_prefix + ".json", json);
  }
  std::cerr << "success_rate=" << report.success_rate()
            << " calls_mean=" << report.mean_calls()
            << " calls/nlogn=" << report.calls_per_nlogn() << "\n";
  if (cfg.min_success >= 0 && report.success_rate() < cfg.min_success) return 1;
  return 0;
}

int cmd_verify(const std::string& algo_name_str, const std::string& in_path) {
  const Algo algo = parse_algo(algo_name_str);
  const Instance inst = load_instance(in_path);
  switch (algo) {
    case Algo::hull:
    case Algo::delaunay:
    case Algo::emst:
      validate_points_general_position(inst.points);
      std::cout << "points=" << inst.points.size()
                << " hull=" << exact_hull_gift_wrap(inst.points).size() << "\n";
      break;
    case Algo::closest_pair: {
      validate_points_general_position(inst.points);
      validate_unique_closest_pair(inst.points);
      const auto [a, b] = brute_force_closest_pair(inst.points);
      std::cout << "points=" << inst.points.size() << " closest=(" << a << "," << b << ")\n";
      break;
    }
    case Algo::sort:
    case Algo::bst_ops:
      validate_distinct_x(inst.points);
      std::cout << "points=" << inst.points.size() << " distinct-x ok\n";
      break;
    case Algo::trapezoid:
      validate_noncrossing_segments(inst.segments);
      std::cout << "segments=" << inst.segments.size() << " non-crossing ok\n";
      break;
    case Algo::sweep:
      validate_crossing_instance(inst.segments);
      std::cout << "segments=" << inst.segments.size()
                << " crossings=" << count_crossings(inst.segments) << "\n";
      break;
    case Algo::walk:
      throw Error("walk has no instance file");
  }
  std::cout << "valid\n";
  return 0;
}

int cmd_counterexample(u32 log2_n, u32 trials, u64 seed, double K, double c) {
  CounterexampleConfig cfg;
  cfg.log2_n = log2_n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.K = K;
  cfg.c = c;
  const CounterexampleResult res = run_counterexample(cfg);
  const double log2n = double(log2_n);
  const double norm = log2n * log2n / std::log2(std::max(2.0, log2n));
  std::cout << "n=2^" << log2_n << " mean_steps=" << res.mean_steps
            << " normalized=" << res.mean_steps / norm
            << " leaf_goal_rate=" << res.leaf_goal_rate
            << " predicted_escape=" << res.predicted_escape
            << " forcing=" << res.forcing_probability << " threshold=" << res.threshold << "\n";
  return 0;
}

int cmd_scaling(const std::string& mode, const std::string& algo_str, u32 n, double p, double c,
                u64 seed, u32 trials, const std::string& out_path) {
  std::ostringstream csv;
  if (mode == "epsilon") {
    const auto res =
        walk_epsilon_scaling(n, 1u << 10, std::vector<double>{2.0, 2.5, 3.0, 3.5, 4.0}, trials,
                             seed);
    csv << "c,log2_inv_eps,mean_consultations\n";
    for (const auto& pt : res.points)
      csv << pt.c << ',' << pt.log2_inv_eps << ',' << pt.mean_consultations << '\n';
    std::cout << "slope=" << res.slope << " intercept=" << res.intercept << " r2=" << res.r2
              << "\n";
  } else if (mode == "n") {
    std::vector<u32> ns;
    for (u32 v = std::max<u32>(n / 8, 16); v <= n; v *= 2) ns.push_back(v);
    const auto pts = size_scaling(parse_algo(algo_str), ns, p, c, seed, trials);
    csv << "n,calls_mean,calls_per_nlogn,structure_per_n\n";
    for (const auto& pt : pts) {
      csv << pt.n << ',' << pt.mean_calls << ',' << pt.ratio << ',' << pt.aux << '\n';
      std::cout << "n=" << pt.n << " ratio=" << pt.ratio << " structure/n=" << pt.aux << "\n";
    }
  } else {
    throw Error("scaling mode must be 'epsilon' or 'n'");
  }
  if (!out_path.empty()) write_file(out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy-primitive computational geometry harness"};
  app.require_subcommand(1);

  std::string kind = "points-uniform", in_path, out_path, algo_str = "hull", mode = "n";
  ExperimentConfig cfg;
  bool serial = false;
  u32 log2_n = 12;
  double K = 0.2;

  auto* gen = app.add_subcommand("gen", "generate a validated instance");
  gen->add_option("--kind", kind, "points-uniform | segments-noncrossing | segments-crossing | sorted-adversarial");
  gen->add_option("--n", cfg.n, "instance size")->required();
  gen->add_option("--seed", cfg.seed, "generator seed");
  gen->add_option("--out", out_path, "output file (stdout otherwise)");

  auto* run = app.add_subcommand("run", "run seeded noisy trials with exact verification");
  run->add_option("--algo", algo_str,
                  "walk | sort | bst | trapezoid | sweep | closest-pair | hull | delaunay | emst")
      ->required();
  run->add_option("--n", cfg.n, "instance size (ignored with --in)");
  run->add_option("--p", cfg.p, "primitive error probability in [0, 1/2)");
  run->add_option("--c", cfg.c, "epsilon exponent: per-walk tolerance n^-c");
  run->add_option("--seed", cfg.seed, "base seed; trial streams derive from it");
  run->add_option("--trials", cfg.trials, "number of independent trials");
  run->add_option("--in", cfg.instance_file, "instance file instead of generation");
  run->add_option("--out", out_path, "report prefix; writes <out>.csv and <out>.json");
  run->add_option("--queries", cfg.queries, "point-location queries per finished structure");
  run->add_option("--threads", cfg.threads, "trial lanes (1 = serial)");
  run->add_option("--min-success", cfg.min_success, "exit nonzero below this success rate");
  run->add_flag("--emit-trapezoids", cfg.emit_trapezoids, "sweep: emit the vertical decomposition");
  run->add_flag("--instrumented", cfg.instrumented, "exact structural checks during construction");
  run->add_flag("--serial", serial, "force the serial reference lane");

  auto* verify = app.add_subcommand("verify", "validate an instance against exact oracles");
  verify->add_option("--algo", algo_str, "target algorithm")->required();
  verify->add_option("--in", in_path, "instance file")->required();

  auto* cx = app.add_subcommand("counterexample", "generalized-walk stress scenario");
  cx->add_option("--n", log2_n, "log2 of the tree size (n = 2^value)");
  cx->add_option("--trials", cfg.trials, "trials");
  cx->add_option("--seed", cfg.seed, "seed");
  cx->add_option("--K", K, "forcing-branch constant");
  cx->add_option("--c", cfg.c, "termination exponent");

  auto* scal = app.add_subcommand("scaling", "epsilon or size scaling sweeps");
  scal->add_option("--mode", mode, "epsilon | n");
  scal->add_option("--algo", algo_str, "algorithm for mode n");
  scal->add_option("--n", cfg.n, "path length (epsilon) or largest size (n)");
  scal->add_option("--p", cfg.p, "error probability");
  scal->add_option("--c", cfg.c, "epsilon exponent");
  scal->add_option("--seed", cfg.seed, "seed");
  scal->add_option("--trials", cfg.trials, "trials per point");
  scal->add_option("--out", out_path, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(kind, cfg.n, cfg.seed, out_path);
    if (run->parsed()) {
      cfg.algo = parse_algo(algo_str);
      return cmd_run(cfg, out_path, serial);
    }
    if (verify->parsed()) return cmd_verify(algo_str, in_path);
    if (cx->parsed()) return cmd_counterexample(log2_n, cfg.trials, cfg.seed, K, cfg.c);
    if (scal->parsed())
      return cmd_scaling(mode, algo_str, cfg.n, cfg.p, cfg.c, cfg.seed, cfg.trials, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
