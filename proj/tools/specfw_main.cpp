// Command-line front end: solve a serialized instance, replicate the seeded
// experiment tables, run the variant comparison, or report certificates for
// a computed solution.

#include "specfw/diagnostics.hpp"
#include "specfw/experiments.hpp"
#include "specfw/instances.hpp"
#include "specfw/projections.hpp"
#include "specfw/solver.hpp"
#include "specfw/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace specfw;
using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct SolveArgs {
  std::string instance;
  std::string variant = "fw-ls-exact";
  std::string out;
  double tol = 1e-9;
  double tol_rel = 0.0;
  int max_iters = 1000;
  double gap_estimate = 0.0;
  double beta = 0.0;
};

void cmd_solve(const SolveArgs& args, bool has_gap, bool has_beta) {
  const nlohmann::json doc = read_json(args.instance);
  const InstanceKind kind = instance_kind(doc);
  const auto variant = variant_from_name(args.variant);
  if (!variant) {
    throw std::runtime_error("unknown variant: " + args.variant);
  }

  SolverConfig config;
  config.variant = *variant;
  config.max_iters = args.max_iters;
  config.tol = args.tol;
  config.tol_rel = args.tol_rel;
  if (has_gap) config.gap_estimate = args.gap_estimate;
  if (has_beta) config.beta_override = args.beta;

  const std::filesystem::path out = args.out;
  std::filesystem::create_directories(out);

  int iters = 0;
  double final_f = 0, final_gap = 0, wall = 0;
  StopReason stop = StopReason::MAX_ITERS;

  if (kind == InstanceKind::QUAD_MEAS) {
    if (config.variant == Variant::MIXED ||
        config.variant == Variant::SMOOTHED_REGFW) {
      throw std::runtime_error(
          "variant " + args.variant +
          " needs a two-block or entrywise-l1 objective; quad-meas instances "
          "solve with the fw/fwpg/regfw variants");
    }
    QuadMeasInstance inst = quad_meas_from_json(doc);
    const double tau = inst.tau;
    QuadMeasObjective obj(std::move(inst.a), std::move(inst.b),
                          std::move(inst.y));
    const SpectraPoint x1 =
        default_start(obj, tau, config.eigen_tol, config.eigen_max_iters);
    const auto t0 = Clock::now();
    SolveResult res = solve(obj, x1, config);
    wall = ms_since(t0);
    iters = static_cast<int>(res.trace.rows.size());
    final_f = res.f_value;
    final_gap = res.gap;
    stop = res.stop;
    write_trace_csv(out / "trace.csv", res.trace);
    write_json(out / "solution.json", solution_json(res.x));
  } else {
    if (config.variant != Variant::MIXED) {
      throw std::runtime_error(
          "rpca instances solve with --variant mixed (got " + args.variant +
          ")");
    }
    RpcaInstance inst = rpca_from_json(doc);
    RpcaObjective obj(inst.m, inst.s);
    MixedPoint start{default_start(obj, inst.tau, config.eigen_tol,
                                   config.eigen_max_iters),
                     Eigen::VectorXd::Zero(obj.y_dim())};
    const auto t0 = Clock::now();
    MixedSolveResult res = mixed_solve(obj, start, config);
    wall = ms_since(t0);
    iters = static_cast<int>(res.trace.rows.size());
    final_f = res.f_value;
    final_gap = res.gap;
    stop = res.stop;
    write_trace_csv(out / "trace.csv", res.trace);
    write_json(out / "solution.json",
               solution_json(res.point.x, &res.point.y));
  }

  write_json(out / "summary.json",
             summary_json(variant_name(config.variant), iters, final_f,
                          final_gap, wall, config));
  std::printf("%s: %d iters, f = %.10g, gap = %.4g, %s, %.1f ms\n",
              variant_name(config.variant), iters, final_f, final_gap,
              stop == StopReason::GAP_CONVERGED ? "converged" : "max-iters",
              wall);
}

void print_table(const TableResult& result) {
  for (const TableRow& row : result.rows) {
    if (row.ok) {
      std::printf(
          "run %3d  error %-10.5g delta %-9.4g snr %-9.4g iters %5d  "
          "gap %-10.4g %.0f ms\n",
          row.run, row.recovery_error, row.delta, row.snr, row.iters,
          row.final_gap, row.wall_ms);
    } else {
      std::printf("run %3d  FAILED: %s\n", row.run,
                  row.error_message.c_str());
    }
  }
  std::printf(
      "%s n=%d: mean error %.5g, mean delta %.5g, mean snr %.5g, "
      "failures %d/%d\n",
      result.family.c_str(), result.n, result.mean_error, result.mean_delta,
      result.mean_snr, result.failures, result.runs);
  if (result.failures == result.runs) {
    throw std::runtime_error("all runs failed");
  }
}

void cmd_compare(const CompareOptions& opts) {
  const CompareResult result = run_compare(opts);
  for (std::size_t v = 0; v < result.variants.size(); ++v) {
    int failures = 0;
    for (bool ok : result.ok[v]) {
      if (!ok) ++failures;
    }
    std::printf("%-12s mean iters %8.1f  failures %d/%d\n",
                variant_name(result.variants[v]), result.mean_iters[v],
                failures, result.runs);
    if (failures == result.runs) {
      std::printf("  first error: %s\n", result.errors[v][0].c_str());
    }
  }
  double gap_sum = 0;
  int gap_count = 0;
  for (double g : result.gap_estimates) {
    if (std::isfinite(g)) {
      gap_sum += g;
      ++gap_count;
    }
  }
  if (gap_count > 0) {
    std::printf("mean delta-hat %.5g over %d runs\n", gap_sum / gap_count,
                gap_count);
  }
}

struct DiagnoseArgs {
  std::string instance;
  std::string solution;
  std::string out;
  int r = 1;
  double zeta = 1.0;
  int probe_iters = 300;
};

void cmd_diagnose(const DiagnoseArgs& args) {
  const nlohmann::json doc = read_json(args.instance);
  const InstanceKind kind = instance_kind(doc);
  Eigen::VectorXd y_star;
  const SpectraPoint x_star = solution_from_json(read_json(args.solution),
                                                 &y_star);

  struct Probe {
    std::vector<SpectraPoint> points;
    std::vector<double> f_values;
    std::vector<Eigen::VectorXd> vertices;
    std::vector<SymMatrix> grads;
  };
  Probe probe;
  const int stride = std::max(1, (args.probe_iters + 63) / 64);
  const IterObserver observer = [&](const IterationView& view) {
    if (view.iter != 1 && view.iter % stride != 0) return;
    probe.points.push_back(
        project_scaled_spectrahedron(view.x_dense, view.x_scale));
    probe.f_values.push_back(view.f_value);
    probe.vertices.push_back(view.v);
    probe.grads.push_back(view.grad);
  };

  SolverConfig pconfig;
  pconfig.max_iters = args.probe_iters;
  pconfig.tol = 0.0;
  pconfig.tol_rel = 1e-8;

  double f_star = 0, beta = 0;
  SymMatrix grad_star = SymMatrix::zero(x_star.dense().n());
  if (kind == InstanceKind::QUAD_MEAS) {
    QuadMeasInstance inst = quad_meas_from_json(doc);
    const double tau = inst.tau;
    QuadMeasObjective obj(std::move(inst.a), std::move(inst.b),
                          std::move(inst.y));
    if (x_star.dense().n() != obj.dim()) {
      throw std::runtime_error("solution dimension does not match instance");
    }
    f_star = obj.value(x_star);
    grad_star = obj.gradient(x_star);
    beta = obj.beta();
    pconfig.variant = Variant::FW_LS_EXACT;
    fw_solve(obj, default_start(obj, tau), pconfig, observer);
  } else {
    RpcaInstance inst = rpca_from_json(doc);
    RpcaObjective obj(inst.m, inst.s);
    if (x_star.dense().n() != obj.dim()) {
      throw std::runtime_error("solution dimension does not match instance");
    }
    if (y_star.size() == 0) y_star = Eigen::VectorXd::Zero(obj.y_dim());
    if (y_star.size() != obj.y_dim()) {
      throw std::runtime_error("solution y dimension does not match instance");
    }
    f_star = obj.value(x_star.dense(), y_star);
    grad_star = obj.grad_x(x_star.dense(), y_star);
    beta = obj.beta_g() * obj.op_norm() * obj.op_norm();
    pconfig.variant = Variant::MIXED;
    MixedPoint start{default_start(obj, inst.tau),
                     Eigen::VectorXd::Zero(obj.y_dim())};
    mixed_solve(obj, start, pconfig, observer);
  }

  const int rank_star = static_cast<int>(x_star.weights().size());
  const int r = std::max(args.r, rank_star);
  const GapReport gap = grad_eigengap(grad_star, r);

  nlohmann::json report;
  report["delta"] = json_number(gap.delta);
  report["delta_r"] = json_number(gap.delta_r);

  if (gap.delta > 1e-12) {
    report["qg_violation"] = json_number(quadratic_growth_check(
        probe.points, probe.f_values, x_star, f_star, gap.delta));
  } else {
    report["qg_violation"] = nullptr;
  }

  if (gap.delta > 1e-12 && rank_star == 1) {
    int violations = 0;
    for (std::size_t i = 0; i < probe.vertices.size(); ++i) {
      SymMatrix diff(probe.grads[i].mat() - grad_star.mat());
      const ProximityReport prox = davis_kahan_proximity(
          probe.vertices[i], x_star, spectral_norm(diff), gap.delta);
      if (!prox.holds()) ++violations;
    }
    report["dk_violations"] = violations;
  } else {
    report["dk_violations"] = nullptr;
  }

  const RankRobustnessReport rr =
      rank_robustness(x_star, grad_star, beta, r, args.zeta);
  report["rank_robustness"] = nlohmann::json{{"rank", rr.rank},
                                             {"threshold", rr.threshold},
                                             {"zeta", rr.zeta}};

  std::printf("%s\n", report.dump(2).c_str());
  if (!args.out.empty()) {
    write_json(args.out, report);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frank-Wolfe solvers over scaled spectrahedra"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve a serialized instance");
  solve_cmd->add_option("--instance", solve_args.instance, "Instance JSON")
      ->required();
  solve_cmd->add_option("--variant", solve_args.variant,
                        "fw-ls-exact | fw-ls-quad | fwpg | regfw | regfw-ls | "
                        "mixed");
  solve_cmd->add_option("--tol", solve_args.tol, "Absolute gap threshold");
  solve_cmd->add_option("--tol-rel", solve_args.tol_rel,
                        "Relative gap threshold (times f at the start)");
  solve_cmd->add_option("--max-iters", solve_args.max_iters,
                        "Iteration budget");
  solve_cmd->add_option("--gap-estimate", solve_args.gap_estimate,
                        "delta-hat for the regularized variants");
  solve_cmd->add_option("--beta", solve_args.beta,
                        "Smoothness constant override");
  solve_cmd->add_option("--out", solve_args.out, "Output directory")
      ->required();
  solve_cmd->callback([&]() {
    cmd_solve(solve_args, solve_cmd->count("--gap-estimate") > 0,
              solve_cmd->count("--beta") > 0);
  });

  CLI::App* exp_cmd =
      app.add_subcommand("experiment", "Seeded table replications");
  exp_cmd->require_subcommand(1);
  TableOptions quad_opts;
  std::string quad_out;
  CLI::App* quad_cmd = exp_cmd->add_subcommand(
      "quad-meas", "Quadratic-measurement recovery table");
  quad_cmd->add_option("--n", quad_opts.n, "Dimension");
  quad_cmd->add_option("--runs", quad_opts.runs, "Seeded replications");
  quad_cmd->add_option("--seed", quad_opts.seed, "Master seed");
  quad_cmd->add_option("--out", quad_out, "Output directory");
  quad_cmd->add_option("--threads", quad_opts.threads, "Worker threads");
  quad_cmd->add_option("--max-iters", quad_opts.max_iters,
                       "Per-run iteration budget");
  quad_cmd->add_option("--tol-rel", quad_opts.tol_rel,
                       "Relative stopping gap");
  quad_cmd->add_option("--m", quad_opts.m, "Measurements (0 = 20n)");
  quad_cmd->add_option("--c", quad_opts.c, "Noise level");
  quad_cmd->add_option("--tau", quad_opts.tau, "Trace bound (0 = n/2)");
  quad_cmd->callback([&]() {
    quad_opts.out_dir = quad_out;
    print_table(run_quad_meas_table(quad_opts));
  });

  TableOptions rpca_opts;
  std::string rpca_out;
  CLI::App* rpca_cmd =
      exp_cmd->add_subcommand("rpca", "Robust-PCA recovery table");
  rpca_cmd->add_option("--n", rpca_opts.n, "Dimension");
  rpca_cmd->add_option("--runs", rpca_opts.runs, "Seeded replications");
  rpca_cmd->add_option("--seed", rpca_opts.seed, "Master seed");
  rpca_cmd->add_option("--out", rpca_out, "Output directory");
  rpca_cmd->add_option("--threads", rpca_opts.threads, "Worker threads");
  rpca_cmd->add_option("--max-iters", rpca_opts.max_iters,
                       "Per-run iteration budget");
  rpca_cmd->add_option("--tol-rel", rpca_opts.tol_rel,
                       "Relative stopping gap");
  rpca_cmd->add_option("--p", rpca_opts.p,
                       "Corruption probability (0 = 1/sqrt(n))");
  rpca_cmd->add_option("--tau", rpca_opts.tau, "Trace bound (0 = 0.8)");
  rpca_cmd->callback([&]() {
    rpca_opts.out_dir = rpca_out;
    print_table(run_rpca_table(rpca_opts));
  });

  CompareOptions cmp_opts;
  std::string cmp_out;
  double cmp_gap = 0.0;
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "Variant comparison on one family");
  cmp_cmd->add_option("--n", cmp_opts.n, "Dimension");
  cmp_cmd->add_option("--runs", cmp_opts.runs, "Seeded replications");
  cmp_cmd->add_option("--seed", cmp_opts.seed, "Master seed");
  cmp_cmd->add_flag("--beta-sqrt-n", cmp_opts.beta_sqrt_n,
                    "Override beta with sqrt(n)");
  cmp_cmd->add_option("--gap-estimate", cmp_gap,
                      "delta-hat for regfw-ls (default: half the measured "
                      "gap at each run's fw-ls-exact solution)");
  cmp_cmd->add_option("--out", cmp_out, "Output directory");
  cmp_cmd->add_option("--threads", cmp_opts.threads, "Worker threads");
  cmp_cmd->add_option("--max-iters", cmp_opts.max_iters,
                      "Per-run iteration budget");
  cmp_cmd->add_option("--tol-rel", cmp_opts.tol_rel, "Relative stopping gap");
  cmp_cmd->callback([&]() {
    cmp_opts.out_dir = cmp_out;
    if (cmp_cmd->count("--gap-estimate") > 0) cmp_opts.gap_estimate = cmp_gap;
    cmd_compare(cmp_opts);
  });

  DiagnoseArgs diag_args;
  CLI::App* diag_cmd = app.add_subcommand(
      "diagnose", "Certificate report for a computed solution");
  diag_cmd->add_option("--instance", diag_args.instance, "Instance JSON")
      ->required();
  diag_cmd->add_option("--solution", diag_args.solution, "Solution JSON")
      ->required();
  diag_cmd->add_option("--r", diag_args.r, "Rank hypothesis");
  diag_cmd->add_option("--zeta", diag_args.zeta,
                       "Trace inflation for the robustness probe");
  diag_cmd->add_option("--probe-iters", diag_args.probe_iters,
                       "Iteration budget for the sampling run");
  diag_cmd->add_option("--out", diag_args.out, "Write the report here too");
  diag_cmd->callback([&]() { cmd_diagnose(diag_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
