// Experiment orchestration: seeded table replications and the variant
// comparison, with optional CSV/JSON emission.
//
// Run k of a batch draws its generator seed as stream_seed(master, k); inside
// a run the instance/noise/start streams follow the rng.hpp split. Workers
// run independent (run, variant) tasks; SPECFW_THREADS caps the pool.
#pragma once

#include "specfw/instances.hpp"
#include "specfw/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace specfw {

/// Worker cap: SPECFW_THREADS when set (>= 1), else hardware concurrency,
/// clamped to [1, task_count].
int worker_count(int task_count);

/// Cold start tau * u u^T, u the leading eigenvector of -grad f(tau/n I).
SpectraPoint default_start(const Objective& f, double tau, double eigen_tol = 1e-9,
                           int eigen_max_iters = 100000);
/// Same anchor for the matrix block of a two-block objective (y = 0).
SpectraPoint default_start(const MixedObjective& f, double tau,
                           double eigen_tol = 1e-9, int eigen_max_iters = 100000);

/// Comparison start: tau * u u^T, u the leading eigenvector of
/// -grad f(tau x x^T) for a seeded random unit x (start-vector stream).
SpectraPoint compare_start(const Objective& f, double tau, std::uint64_t seed,
                           double eigen_tol = 1e-9, int eigen_max_iters = 100000);

struct TableOptions {
  int n = 100;
  int runs = 20;
  std::uint64_t seed = 1;
  /// When set, writes instances/run_XXX.json, traces/run_XXX.csv, summary.json.
  std::filesystem::path out_dir;
  int threads = 0;  // 0 = auto
  int max_iters = 5000;
  double tol_rel = 1e-8;
  // Family knobs; zero means the family default (m = 20n, tau = n/2 for
  // quad-meas; p = 1/sqrt(n), tau = 0.8 for rpca).
  int m = 0;
  double c = 0.5;
  double p = 0.0;
  double tau = 0.0;
};

struct TableRow {
  int run = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error_message;
  double recovery_error = 0.0;
  double delta = 0.0;
  double snr = 0.0;
  int iters = 0;
  double final_f = 0.0;
  double final_gap = 0.0;
  double wall_ms = 0.0;
};

struct TableResult {
  std::string family;
  int n = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::vector<TableRow> rows;
  int failures = 0;
  // Means over successful runs.
  double mean_error = 0.0;
  double mean_delta = 0.0;
  double mean_snr = 0.0;
};

TableResult run_quad_meas_table(const TableOptions& opts);
TableResult run_rpca_table(const TableOptions& opts);

nlohmann::json table_summary_json(const TableResult& result);

struct CompareOptions {
  int n = 200;
  int runs = 20;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
  int threads = 0;
  int max_iters = 5000;
  double tol_rel = 1e-8;
  bool beta_sqrt_n = false;
  /// delta-hat for the regularized variant; unset means half the measured
  /// gradient eigen-gap at that seed's FW_LS_EXACT solution.
  std::optional<double> gap_estimate;
};

struct CompareResult {
  int n = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::vector<Variant> variants;
  /// traces[v][k]: variant v on run k. ok[v][k] false means the run failed
  /// (message in errors[v][k]) and the trace is empty.
  std::vector<std::vector<Trace>> traces;
  std::vector<std::vector<bool>> ok;
  std::vector<std::vector<std::string>> errors;
  std::vector<double> gap_estimates;  // per run
  /// Per-variant iteration-indexed mean over runs still active at that iter.
  std::vector<Trace> averaged;
  std::vector<double> mean_iters;  // per variant, successful runs
};

CompareResult run_compare(const CompareOptions& opts);

nlohmann::json compare_summary_json(const CompareResult& result);

/// finite -> number, else null (JSON has no inf/nan).
nlohmann::json json_number(double v);

}  // namespace specfw
