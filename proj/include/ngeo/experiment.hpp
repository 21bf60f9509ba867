// Experiment runner: seeded Monte Carlo trials over the noisy algorithms,
// each verified against an exact reference, with trial-level OpenMP
// parallelism and a serial reference lane producing identical reports.
#pragma once

#include <string>
#include <vector>

#include "ngeo/core.hpp"
#include "ngeo/instance.hpp"

namespace ngeo {

enum class Algo {
  walk,
  sort,
  bst_ops,
  trapezoid,
  sweep,
  closest_pair,
  hull,
  delaunay,
  emst,
};

const char* algo_name(Algo a);
Algo parse_algo(const std::string& name);
InstanceKind default_kind(Algo a);

struct ExperimentConfig {
  Algo algo = Algo::hull;
  u32 n = 128;
  double p = 0.1;
  double c = 2.0;
  u64 seed = 1;
  u32 trials = 1;
  std::string instance_file;  // optional; generated from (kind, n, seed) otherwise
  bool emit_trapezoids = false;
  bool instrumented = false;
  u32 queries = 0;  // extra point-location queries per finished structure
  int threads = 0;  // 0: runtime default, 1: serial, >1: that many lanes
  double min_success = -1.0;  // harness exit threshold when >= 0
};

struct TrialResult {
  bool success = false;
  u64 primitive_calls = 0;
  u64 consultations = 0;
  u64 traversal_steps = 0;
  u64 stay_pushes = 0;
  u64 retries = 0;
  u64 query_failures = 0;
  std::string error;
  double wall_ms = 0.0;
};

struct ExperimentReport {
  ExperimentConfig cfg;
  InstanceKind kind = InstanceKind::points_uniform;
  u32 instance_n = 0;
  u32 crossing_count = 0;  // exact k for sweep instances
  std::vector<TrialResult> trials;

  double success_rate() const;
  double mean_calls() const;
  double p95_calls() const;
  double mean_consultations() const;
  double p95_consultations() const;
  u64 total_query_failures() const;
  u64 total_queries() const { return u64(cfg.queries) * trials.size(); }
  // Primitive calls normalized by the scaling anchor: n log2 n, or
  // (n + k) log2 n for the sweep.
  double calls_per_nlogn() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment_serial(const ExperimentConfig& cfg);

// Fixed column order; wall_ms is last and dropped when include_timing is
// false, which defines the byte-identical replay scope.
std::string report_csv(const ExperimentReport&, bool include_timing = true);
std::string report_json(const ExperimentReport&, bool include_timing = true);

// Mean total walk consultations on an adversarial path as epsilon = n^-c
// varies; the additive fit against log2(1/epsilon).
struct EpsilonScalingPoint {
  double c = 0;
  double log2_inv_eps = 0;
  double mean_consultations = 0;
};

struct EpsilonScalingResult {
  std::vector<EpsilonScalingPoint> points;
  double slope = 0;      // consultations per unit log2(1/epsilon)
  double intercept = 0;
  double r2 = 0;
};

EpsilonScalingResult walk_epsilon_scaling(u32 path_len, u32 dag_n, const std::vector<double>& cs,
                                          u32 trials, u64 seed);

// Mean primitive calls per n log2 n across instance sizes.
struct SizeScalingPoint {
  u32 n = 0;
  double ratio = 0;
  double mean_calls = 0;
  double aux = 0;  // algorithm-specific (history-DAG nodes per n, etc.)
};

std::vector<SizeScalingPoint> size_scaling(Algo algo, const std::vector<u32>& ns, double p,
                                           double c, u64 seed, u32 trials);

}  // namespace ngeo
