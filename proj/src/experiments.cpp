#include "specfw/experiments.hpp"

#include "specfw/diagnostics.hpp"
#include "specfw/eigs.hpp"
#include "specfw/rng.hpp"
#include "specfw/trace_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace specfw {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void run_parallel(int workers, int count, const std::function<void(int)>& task) {
  if (count <= 0) return;
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::filesystem::path indexed_path(const std::filesystem::path& dir,
                                   const std::string& prefix, int k,
                                   const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%03d%s", prefix.c_str(), k, ext);
  return dir / buf;
}

SpectraPoint start_from_anchor(const Objective& f, const SymMatrix& anchor,
                               double tau, double eigen_tol,
                               int eigen_max_iters) {
  const SymMatrix grad = f.gradient(anchor);
  SymMatrix neg((-grad.mat()).eval());
  EigenPair top = leading_eigenvector(neg, eigen_tol, eigen_max_iters);
  return SpectraPoint::rank_one(top.vector, tau);
}

Trace average_trace(const std::vector<Trace>& runs,
                    const std::vector<bool>& ok) {
  std::size_t max_len = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (ok[k]) max_len = std::max(max_len, runs[k].rows.size());
  }
  Trace avg;
  avg.rows.reserve(max_len);
  for (std::size_t t = 0; t < max_len; ++t) {
    double f = 0, gap = 0, step = 0, eigengap = 0, rank = 0, elapsed = 0;
    int count = 0;
    int branch_counts[3] = {0, 0, 0};
    for (std::size_t k = 0; k < runs.size(); ++k) {
      if (!ok[k] || runs[k].rows.size() <= t) continue;
      const IterateRecord& r = runs[k].rows[t];
      f += r.f_value;
      gap += r.duality_gap;
      step += r.step_size;
      eigengap += r.grad_eigengap;
      rank += r.rank;
      elapsed += static_cast<double>(r.elapsed_ns);
      ++branch_counts[static_cast<int>(r.branch)];
      ++count;
    }
    if (count == 0) break;
    IterateRecord r;
    r.iter = static_cast<int>(t) + 1;
    r.f_value = f / count;
    r.duality_gap = gap / count;
    r.step_size = step / count;
    r.rank = static_cast<int>(std::llround(rank / count));
    r.grad_eigengap = eigengap / count;
    const int* best =
        std::max_element(branch_counts, branch_counts + 3);
    r.branch = static_cast<Branch>(best - branch_counts);
    r.elapsed_ns = static_cast<std::int64_t>(std::llround(elapsed / count));
    avg.rows.push_back(r);
  }
  return avg;
}

nlohmann::json table_row_json(const TableRow& row) {
  nlohmann::json j{
      {"run", row.run},
      {"seed", row.seed},
      {"ok", row.ok},
      {"iters", row.iters},
      {"wall_ms", row.wall_ms},
  };
  if (row.ok) {
    j["recovery_error"] = json_number(row.recovery_error);
    j["delta"] = json_number(row.delta);
    j["snr"] = json_number(row.snr);
    j["final_f"] = json_number(row.final_f);
    j["final_gap"] = json_number(row.final_gap);
  } else {
    j["error_message"] = row.error_message;
  }
  return j;
}

void aggregate_table(TableResult* result) {
  double err = 0, delta = 0, snr = 0;
  int ok_count = 0;
  for (const TableRow& row : result->rows) {
    if (!row.ok) {
      ++result->failures;
      continue;
    }
    err += row.recovery_error;
    delta += row.delta;
    snr += row.snr;
    ++ok_count;
  }
  result->mean_error = ok_count ? err / ok_count : 0.0;
  result->mean_delta = ok_count ? delta / ok_count : 0.0;
  result->mean_snr = ok_count ? snr / ok_count : 0.0;
}

struct OutDirs {
  std::filesystem::path instances;
  std::filesystem::path traces;
  bool enabled = false;
};

OutDirs prepare_out(const std::filesystem::path& out_dir) {
  OutDirs dirs;
  if (out_dir.empty()) return dirs;
  dirs.enabled = true;
  dirs.instances = out_dir / "instances";
  dirs.traces = out_dir / "traces";
  std::filesystem::create_directories(dirs.instances);
  std::filesystem::create_directories(dirs.traces);
  return dirs;
}

}  // namespace

namespace {

int env_thread_cap() {
  if (const char* env = std::getenv("SPECFW_THREADS")) {
    const int v = std::atoi(env);
    return v < 1 ? 1 : v;
  }
  return 0;
}

int pool_size(int requested, int task_count) {
  if (requested <= 0) return worker_count(task_count);
  const int cap = env_thread_cap();
  const int workers = cap > 0 ? std::min(requested, cap) : requested;
  return std::clamp(workers, 1, std::max(1, task_count));
}

}  // namespace

int worker_count(int task_count) {
  int cap = env_thread_cap();
  if (cap == 0) {
    cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
  }
  return std::clamp(cap, 1, std::max(1, task_count));
}

SpectraPoint default_start(const Objective& f, double tau, double eigen_tol,
                           int eigen_max_iters) {
  const SymMatrix anchor = SymMatrix::identity(f.dim()).scaled(tau / f.dim());
  return start_from_anchor(f, anchor, tau, eigen_tol, eigen_max_iters);
}

SpectraPoint default_start(const MixedObjective& f, double tau,
                           double eigen_tol, int eigen_max_iters) {
  const int n = f.dim();
  const SymMatrix anchor = SymMatrix::identity(n).scaled(tau / n);
  const Eigen::VectorXd y0 = Eigen::VectorXd::Zero(f.y_dim());
  const SymMatrix grad = f.grad_x(anchor, y0);
  SymMatrix neg((-grad.mat()).eval());
  EigenPair top = leading_eigenvector(neg, eigen_tol, eigen_max_iters);
  return SpectraPoint::rank_one(top.vector, tau);
}

SpectraPoint compare_start(const Objective& f, double tau, std::uint64_t seed,
                           double eigen_tol, int eigen_max_iters) {
  Rng rng(stream_seed(seed, 2));
  const Eigen::VectorXd x = rng.unit_vector(f.dim());
  const SymMatrix anchor((tau * (x * x.transpose())).eval());
  return start_from_anchor(f, anchor, tau, eigen_tol, eigen_max_iters);
}

TableResult run_quad_meas_table(const TableOptions& opts) {
  if (opts.n < 2 || opts.runs < 1) {
    throw std::invalid_argument("run_quad_meas_table: bad options");
  }
  const int m = opts.m > 0 ? opts.m : 20 * opts.n;
  const double tau = opts.tau > 0.0 ? opts.tau : 0.5 * opts.n;

  TableResult result;
  result.family = "quad-meas";
  result.n = opts.n;
  result.runs = opts.runs;
  result.seed = opts.seed;
  result.rows.resize(opts.runs);

  const OutDirs out = prepare_out(opts.out_dir);

  run_parallel(pool_size(opts.threads, opts.runs), opts.runs, [&](int k) {
    TableRow row;
    row.run = k;
    row.seed = stream_seed(opts.seed, static_cast<std::uint64_t>(k));
    try {
      QuadMeasInstance inst = gen_quad_meas(opts.n, m, opts.c, tau, row.seed);
      if (out.enabled) {
        write_json(indexed_path(out.instances, "run_", k, ".json"),
                   quad_meas_json(inst));
      }
      const Eigen::MatrixXd truth = inst.x0 * inst.x0.transpose();
      QuadMeasObjective obj(std::move(inst.a), std::move(inst.b), inst.y);

      SolverConfig config;
      config.variant = Variant::FW_LS_EXACT;
      config.max_iters = opts.max_iters;
      config.tol = 0.0;
      config.tol_rel = opts.tol_rel;

      const SpectraPoint x1 = default_start(obj, tau);
      const auto t0 = Clock::now();
      SolveResult res = fw_solve(obj, x1, config);
      row.wall_ms = ms_since(t0);
      row.iters = static_cast<int>(res.trace.rows.size());
      row.final_f = res.f_value;
      row.final_gap = res.gap;
      row.recovery_error =
          ((opts.n / tau) * res.x.dense().mat() - truth).squaredNorm() /
          truth.squaredNorm();
      row.delta = grad_eigengap(obj.gradient(res.x), 1, config.eigen_tol,
                                config.eigen_max_iters)
                      .delta;
      row.snr = inst.snr;
      if (out.enabled) {
        write_trace_csv(indexed_path(out.traces, "run_", k, ".csv"), res.trace);
      }
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error_message = e.what();
    }
    result.rows[k] = std::move(row);
  });

  aggregate_table(&result);
  if (out.enabled) {
    write_json(opts.out_dir / "summary.json", table_summary_json(result));
  }
  return result;
}

TableResult run_rpca_table(const TableOptions& opts) {
  if (opts.n < 2 || opts.runs < 1) {
    throw std::invalid_argument("run_rpca_table: bad options");
  }
  const double p = opts.p > 0.0 ? opts.p : 1.0 / std::sqrt(opts.n);
  const double tau = opts.tau > 0.0 ? opts.tau : 0.8;

  TableResult result;
  result.family = "rpca";
  result.n = opts.n;
  result.runs = opts.runs;
  result.seed = opts.seed;
  result.rows.resize(opts.runs);

  const OutDirs out = prepare_out(opts.out_dir);

  run_parallel(pool_size(opts.threads, opts.runs), opts.runs, [&](int k) {
    TableRow row;
    row.run = k;
    row.seed = stream_seed(opts.seed, static_cast<std::uint64_t>(k));
    try {
      RpcaInstance inst = gen_rpca(opts.n, p, tau, row.seed);
      if (out.enabled) {
        write_json(indexed_path(out.instances, "run_", k, ".json"),
                   rpca_json(inst));
      }
      const Eigen::MatrixXd truth = inst.x0 * inst.x0.transpose();
      RpcaObjective obj(inst.m, inst.s);

      SolverConfig config;
      config.variant = Variant::MIXED;
      config.max_iters = opts.max_iters;
      config.tol = 0.0;
      config.tol_rel = opts.tol_rel;

      MixedPoint start{default_start(obj, tau),
                       Eigen::VectorXd::Zero(obj.y_dim())};
      const auto t0 = Clock::now();
      MixedSolveResult res = mixed_solve(obj, start, config);
      row.wall_ms = ms_since(t0);
      row.iters = static_cast<int>(res.trace.rows.size());
      row.final_f = res.f_value;
      row.final_gap = res.gap;
      row.recovery_error =
          ((1.0 / tau) * res.point.x.dense().mat() - truth).squaredNorm();
      const SymMatrix grad_x = obj.grad_x(res.point.x.dense(), res.point.y);
      row.delta = grad_eigengap(grad_x, 1, config.eigen_tol,
                                config.eigen_max_iters)
                      .delta;
      row.snr = inst.snr;
      if (out.enabled) {
        write_trace_csv(indexed_path(out.traces, "run_", k, ".csv"), res.trace);
      }
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error_message = e.what();
    }
    result.rows[k] = std::move(row);
  });

  aggregate_table(&result);
  if (out.enabled) {
    write_json(opts.out_dir / "summary.json", table_summary_json(result));
  }
  return result;
}

nlohmann::json table_summary_json(const TableResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TableRow& row : result.rows) rows.push_back(table_row_json(row));
  return nlohmann::json{
      {"family", result.family},
      {"n", result.n},
      {"runs", result.runs},
      {"seed", result.seed},
      {"failures", result.failures},
      {"mean_recovery_error", json_number(result.mean_error)},
      {"mean_delta", json_number(result.mean_delta)},
      {"mean_snr", json_number(result.mean_snr)},
      {"rows", std::move(rows)},
  };
}

CompareResult run_compare(const CompareOptions& opts) {
  if (opts.n < 2 || opts.runs < 1) {
    throw std::invalid_argument("run_compare: bad options");
  }
  const int m = 20 * opts.n;
  const double c = 0.5;
  const double tau = 0.5 * opts.n;

  CompareResult result;
  result.n = opts.n;
  result.runs = opts.runs;
  result.seed = opts.seed;
  result.variants = {Variant::FW_LS_EXACT, Variant::FW_LS_QUAD, Variant::FWPG,
                     Variant::REGFW_LS};
  const int nv = static_cast<int>(result.variants.size());
  result.traces.assign(nv, std::vector<Trace>(opts.runs));
  result.ok.assign(nv, std::vector<bool>(opts.runs, false));
  result.errors.assign(nv, std::vector<std::string>(opts.runs));
  result.gap_estimates.assign(opts.runs,
                              std::numeric_limits<double>::quiet_NaN());

  const OutDirs out = prepare_out(opts.out_dir);

  auto make_config = [&](Variant v) {
    SolverConfig config;
    config.variant = v;
    config.max_iters = opts.max_iters;
    config.tol = 0.0;
    config.tol_rel = opts.tol_rel;
    if (opts.beta_sqrt_n) config.beta_override = std::sqrt(opts.n);
    return config;
  };

  auto run_one = [&](int v, int k) {
    const std::uint64_t seed_k =
        stream_seed(opts.seed, static_cast<std::uint64_t>(k));
    try {
      QuadMeasInstance inst = gen_quad_meas(opts.n, m, c, tau, seed_k);
      if (out.enabled && v == 0) {
        write_json(indexed_path(out.instances, "run_", k, ".json"),
                   quad_meas_json(inst));
      }
      QuadMeasObjective obj(std::move(inst.a), std::move(inst.b), inst.y);
      const SpectraPoint x1 = compare_start(obj, tau, seed_k);

      SolverConfig config = make_config(result.variants[v]);
      if (result.variants[v] == Variant::REGFW_LS) {
        config.gap_estimate = result.gap_estimates[k];
        if (!std::isfinite(result.gap_estimates[k])) {
          throw std::runtime_error("no gap estimate available for this run");
        }
      }
      SolveResult res = solve(obj, x1, config);
      if (result.variants[v] == Variant::FW_LS_EXACT) {
        result.gap_estimates[k] = opts.gap_estimate.value_or(
            0.5 * grad_eigengap(obj.gradient(res.x), 1, config.eigen_tol,
                                config.eigen_max_iters)
                      .delta);
      }
      if (out.enabled) {
        const std::string prefix =
            std::string(variant_name(result.variants[v])) + "_run_";
        write_trace_csv(indexed_path(out.traces, prefix, k, ".csv"),
                        res.trace);
      }
      result.traces[v][k] = std::move(res.trace);
      result.ok[v][k] = true;
    } catch (const std::exception& e) {
      result.ok[v][k] = false;
      result.errors[v][k] = e.what();
    }
  };

  // REGFW_LS depends on the exact-line-search run when no explicit estimate
  // is given, so it goes in a second wave.
  if (opts.gap_estimate) {
    for (int k = 0; k < opts.runs; ++k) {
      result.gap_estimates[k] = *opts.gap_estimate;
    }
  }
  const int first_wave = nv - 1;
  run_parallel(pool_size(opts.threads, first_wave * opts.runs),
               first_wave * opts.runs,
               [&](int i) { run_one(i / opts.runs, i % opts.runs); });
  run_parallel(pool_size(opts.threads, opts.runs), opts.runs,
               [&](int k) { run_one(nv - 1, k); });

  result.averaged.reserve(nv);
  result.mean_iters.assign(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    result.averaged.push_back(average_trace(result.traces[v], result.ok[v]));
    double total = 0;
    int count = 0;
    for (int k = 0; k < opts.runs; ++k) {
      if (!result.ok[v][k]) continue;
      total += static_cast<double>(result.traces[v][k].rows.size());
      ++count;
    }
    result.mean_iters[v] = count ? total / count : 0.0;
  }

  if (out.enabled) {
    for (int v = 0; v < nv; ++v) {
      const std::string name = variant_name(result.variants[v]);
      write_trace_csv(out.traces / (name + "_avg.csv"), result.averaged[v]);
    }
    write_json(opts.out_dir / "summary.json", compare_summary_json(result));
  }
  return result;
}

nlohmann::json compare_summary_json(const CompareResult& result) {
  nlohmann::json variants = nlohmann::json::array();
  for (std::size_t v = 0; v < result.variants.size(); ++v) {
    int failures = 0;
    for (bool ok : result.ok[v]) {
      if (!ok) ++failures;
    }
    variants.push_back(nlohmann::json{
        {"variant", variant_name(result.variants[v])},
        {"mean_iters", result.mean_iters[v]},
        {"failures", failures},
    });
  }
  nlohmann::json gaps = nlohmann::json::array();
  for (double g : result.gap_estimates) gaps.push_back(json_number(g));
  return nlohmann::json{
      {"family", "compare"}, {"n", result.n},
      {"runs", result.runs}, {"seed", result.seed},
      {"variants", std::move(variants)},
      {"gap_estimates", std::move(gaps)},
  };
}

nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace specfw
