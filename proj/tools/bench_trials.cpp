// Benchmark: OpenMP-parallel trial lanes against the serial reference lane,
// checking that both produce identical reports (timing aside).
#include <chrono>
#include <functional>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ngeo/experiment.hpp"

using namespace ngeo;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  u32 trials = argc > 1 ? (u32)std::stoul(argv[1]) : 24;
  ExperimentConfig cfg;
  cfg.algo = Algo::hull;
  cfg.n = 1024;
  cfg.p = 0.1;
  cfg.trials = trials;
  cfg.seed = 99;

#ifdef _OPENMP
  std::cout << "omp_max_threads=" << omp_get_max_threads() << "\n";
#else
  std::cout << "openmp disabled\n";
#endif

  ExperimentReport serial_report, parallel_report;
  const double serial_ms = time_ms([&] { serial_report = run_experiment_serial(cfg); });
  const double parallel_ms = time_ms([&] { parallel_report = run_experiment(cfg); });

  std::cout << "algo=" << algo_name(cfg.algo) << " n=" << cfg.n << " trials=" << trials << "\n";
  std::cout << "serial_ms=" << serial_ms << " parallel_ms=" << parallel_ms
            << " speedup=" << serial_ms / parallel_ms << "\n";

  const bool identical = report_csv(serial_report, false) == report_csv(parallel_report, false) &&
                         report_json(serial_report, false) == report_json(parallel_report, false);
  std::cout << "reports_identical=" << (identical ? "yes" : "no") << "\n";
  return identical ? 0 : 1;
}
