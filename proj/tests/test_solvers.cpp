#include "specfw/solver.hpp"

#include "oracles.hpp"
#include "specfw/experiments.hpp"
#include "specfw/instances.hpp"
#include "specfw/rng.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <vector>

using namespace specfw;

namespace {

SymMatrix diag3(double a, double b, double c) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 0) = a;
  d(1, 1) = b;
  d(2, 2) = c;
  return SymMatrix(d);
}

SpectraPoint basis_point(int n, int i, double scale = 1.0) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(i) = 1.0;
  return SpectraPoint::rank_one(e, scale);
}

QuadMeasInstance small_gapped_instance(std::uint64_t seed, int n = 4) {
  // Noiseless measurements of a rank-one ground truth keep the gradient
  // eigen-gap comfortably positive at the optimum.
  return gen_quad_meas(n, 8 * n, 0.0, 1.0, seed);
}

}  // namespace

TEST_CASE("quadratic-model step hand values") {
  CHECK(line_search_quad(1.0, 1.0, 1.0) == 0.0);   // ascent direction clipped
  CHECK(line_search_quad(-1.0, 1.0, 1.0) == 1.0);  // clamp at the vertex
  CHECK(line_search_quad(-0.25, 1.0, 0.5) == doctest::Approx(0.5));
  CHECK(line_search_quad(-1.0, 0.0, 1.0) == 0.0);  // degenerate direction
  CHECK_THROWS_AS(line_search_quad(-1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("duality gap hand value") {
  const SymMatrix grad = diag3(0, 1, 2);
  const SpectraPoint x(1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                       {Eigen::Vector3d::Unit(0), Eigen::Vector3d::Unit(1),
                        Eigen::Vector3d::Unit(2)});
  const Eigen::VectorXd v = Eigen::Vector3d::Unit(0);
  CHECK(duality_gap(x, grad, v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact line search on a linear objective is an endpoint") {
  const LinearObjective f{diag3(0, 1, 2)};
  const SymMatrix x = basis_point(3, 2).dense();
  const SymMatrix v = basis_point(3, 0).dense();
  CHECK(line_search_exact(f, x, v) == 1.0);
  CHECK(line_search_exact(f, v, x) == 0.0);
}

TEST_CASE("fw with exact line search solves a linear objective in one step") {
  const LinearObjective f{diag3(0, 1, 2)};
  SolverConfig config;
  config.variant = Variant::FW_LS_EXACT;
  config.max_iters = 5;
  config.tol = 1e-12;
  const SolveResult res = fw_solve(f, basis_point(3, 2), config);
  CHECK(res.stop == StopReason::GAP_CONVERGED);
  CHECK(res.f_value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((res.x.dense().mat() - basis_point(3, 0).dense().mat()).norm() <=
        1e-9);
  // Record-then-step: row 1 carries the starting values.
  REQUIRE(res.trace.rows.size() >= 2);
  CHECK(res.trace.rows[0].f_value == doctest::Approx(2.0));
  CHECK(res.trace.rows[0].duality_gap == doctest::Approx(2.0));
  CHECK(res.trace.rows[0].step_size == 1.0);
  // Converged final row: zero step, gap below tolerance.
  CHECK(res.trace.rows.back().step_size == 0.0);
  CHECK(res.trace.rows.back().duality_gap <= config.tol);
}

TEST_CASE("regfw fixed step halves the linear gap when delta-hat = beta") {
  const LinearObjective f{diag3(0, 1, 2)};
  SolverConfig config;
  config.variant = Variant::REGFW;
  config.max_iters = 1;
  config.tol = 0.0;
  config.beta_override = 2.0;
  config.gap_estimate = 2.0;  // eta-hat = 2 / (2 * 2 * 1) = 0.5
  const SolveResult res = regfw_solve(f, basis_point(3, 2), config);
  CHECK(res.f_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.trace.rows[0].step_size == doctest::Approx(0.5));
}

TEST_CASE("fwpg branches exactly as the trace-bound test dictates") {
  const LinearObjective f{diag3(0, 1, 2)};
  SolverConfig config;
  config.variant = Variant::FWPG;
  config.max_iters = 1;
  config.tol = 0.0;

  SUBCASE("beta = 1: projection is rank-one, PG branch") {
    config.beta_override = 1.0;
    const SolveResult res = fwpg_solve(f, basis_point(3, 2), config);
    CHECK(res.trace.rows[0].branch == Branch::PG);
    CHECK(res.trace.rows[0].step_size == 1.0);
    CHECK((res.x.dense().mat() - basis_point(3, 0).dense().mat()).norm() <=
          1e-9);
  }

  SUBCASE("beta = 10: spectrum too flat, FW branch with the quad step") {
    config.beta_override = 10.0;
    const SolveResult res = fwpg_solve(f, basis_point(3, 2), config);
    CHECK(res.trace.rows[0].branch == Branch::FW);
    CHECK(res.trace.rows[0].step_size == doctest::Approx(0.1));
  }
}

TEST_CASE("all single-block variants agree with the long pg oracle") {
  const QuadMeasInstance inst = small_gapped_instance(205);
  const QuadMeasObjective f = inst.objective();
  const double tau = inst.tau;

  const oracles::PgResult oracle = oracles::pg_minimize(
      f, tau, Eigen::MatrixXd::Identity(4, 4) * (tau / 4), 60000);

  // delta-hat for the regularized variants: half the true gap at the oracle.
  const auto spectrum = oracles::jacobi_eigs(
      f.gradient(SymMatrix(oracle.x)).mat());
  const double delta =
      spectrum.values(spectrum.values.size() - 2) -
      spectrum.values(spectrum.values.size() - 1);
  REQUIRE(delta > 1e-6);

  for (Variant v : {Variant::FW_LS_EXACT, Variant::FW_LS_QUAD, Variant::FWPG,
                    Variant::REGFW, Variant::REGFW_LS}) {
    CAPTURE(variant_name(v));
    SolverConfig config;
    config.variant = v;
    config.max_iters = 300000;
    config.tol = 1e-11;
    config.gap_estimate = 0.5 * delta;
    const SolveResult res = solve(f, default_start(f, tau), config);
    CHECK(res.f_value <= oracle.f + 1e-6 * (1.0 + std::abs(oracle.f)));
    CHECK(res.f_value >= oracle.f - 1e-6 * (1.0 + std::abs(oracle.f)));
  }
}

TEST_CASE("relative tolerance stops at 1e-8 of the initial value") {
  const QuadMeasInstance inst = small_gapped_instance(209, 5);
  const QuadMeasObjective f = inst.objective();
  SolverConfig config;
  config.variant = Variant::FW_LS_EXACT;
  config.max_iters = 20000;
  config.tol = 0.0;
  config.tol_rel = 1e-8;
  const SolveResult res = fw_solve(f, default_start(f, inst.tau), config);
  REQUIRE(res.stop == StopReason::GAP_CONVERGED);
  const double f1 = res.trace.rows[0].f_value;
  CHECK(res.gap <= 1e-8 * std::abs(f1));
  // The previous row was still above threshold.
  REQUIRE(res.trace.rows.size() >= 2);
  CHECK(res.trace.rows[res.trace.rows.size() - 2].duality_gap >
        1e-8 * std::abs(f1));
}

TEST_CASE("trace bookkeeping: contiguous iters, budget exhaustion") {
  const QuadMeasInstance inst = small_gapped_instance(213);
  const QuadMeasObjective f = inst.objective();
  SolverConfig config;
  config.variant = Variant::FW_LS_QUAD;
  config.max_iters = 7;
  config.tol = 0.0;
  const SolveResult res = fw_solve(f, default_start(f, inst.tau), config);
  CHECK(res.stop == StopReason::MAX_ITERS);
  REQUIRE(res.trace.rows.size() == 7);
  for (int t = 0; t < 7; ++t) {
    CHECK(res.trace.rows[t].iter == t + 1);
    CHECK(res.trace.rows[t].rank >= 1);
    CHECK(res.trace.rows[t].grad_eigengap >= 0.0);
    CHECK(res.trace.rows[t].elapsed_ns >= 0);
  }
  // Monotone descent for the line-search family.
  for (std::size_t t = 1; t < res.trace.rows.size(); ++t) {
    CHECK(res.trace.rows[t].f_value <=
          res.trace.rows[t - 1].f_value + 1e-12);
  }
}

TEST_CASE("fwpg fw-branch rows equal the plain quad-step trace") {
  const QuadMeasInstance inst = small_gapped_instance(217);
  const QuadMeasObjective f = inst.objective();
  // A spread-out start keeps the iterate spectrum flat, and the large beta
  // override keeps the quad steps tiny, so lambda_1 - lambda_2 of the
  // gradient-mapped iterate never clears the trace bound: every step is FW.
  SolverConfig config;
  config.variant = Variant::FWPG;
  config.max_iters = 25;
  config.tol = 0.0;
  config.beta_override = 50.0 * f.beta();
  const SpectraPoint start = SpectraPoint::scaled_identity(f.dim(), inst.tau);

  const SolveResult pg = fwpg_solve(f, start, config);
  config.variant = Variant::FW_LS_QUAD;
  const SolveResult fw = fw_solve(f, start, config);

  REQUIRE(pg.trace.rows.size() == fw.trace.rows.size());
  for (std::size_t t = 0; t < pg.trace.rows.size(); ++t) {
    CHECK(pg.trace.rows[t].branch == Branch::FW);
    CHECK(pg.trace.rows[t].f_value == fw.trace.rows[t].f_value);
    CHECK(pg.trace.rows[t].step_size == fw.trace.rows[t].step_size);
    CHECK(pg.trace.rows[t].duality_gap == fw.trace.rows[t].duality_gap);
  }
}

TEST_CASE("solver output is deterministic") {
  const QuadMeasInstance inst = small_gapped_instance(221);
  const QuadMeasObjective f = inst.objective();
  SolverConfig config;
  config.variant = Variant::FW_LS_EXACT;
  config.max_iters = 40;
  config.tol = 0.0;
  const SolveResult a = fw_solve(f, default_start(f, inst.tau), config);
  const SolveResult b = fw_solve(f, default_start(f, inst.tau), config);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (std::size_t t = 0; t < a.trace.rows.size(); ++t) {
    CHECK(a.trace.rows[t].f_value == b.trace.rows[t].f_value);
    CHECK(a.trace.rows[t].duality_gap == b.trace.rows[t].duality_gap);
    CHECK(a.trace.rows[t].step_size == b.trace.rows[t].step_size);
    CHECK(a.trace.rows[t].rank == b.trace.rows[t].rank);
  }
}

TEST_CASE("observer sees every iteration with consistent fields") {
  const QuadMeasInstance inst = small_gapped_instance(225);
  const QuadMeasObjective f = inst.objective();
  SolverConfig config;
  config.variant = Variant::FW_LS_EXACT;
  config.max_iters = 12;
  config.tol = 0.0;
  int calls = 0;
  const SolveResult res = fw_solve(
      f, default_start(f, inst.tau), config, [&](const IterationView& view) {
        ++calls;
        CHECK(view.iter == calls);
        CHECK(view.x_scale == doctest::Approx(inst.tau));
        CHECK(std::abs(view.v.norm() - 1.0) <= 1e-9);
        CHECK(view.y == nullptr);
        CHECK(view.f_value ==
              doctest::Approx(f.value(view.x_dense)).epsilon(1e-12));
      });
  CHECK(calls == static_cast<int>(res.trace.rows.size()));
}

TEST_CASE("config validation") {
  SolverConfig config;
  config.max_iters = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.tol = -1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.variant = Variant::REGFW;
  const LinearObjective lin{diag3(0, 1, 2)};
  // Regularized variants need both beta and delta-hat.
  CHECK_THROWS_AS(regfw_solve(lin, basis_point(3, 2), config),
                  std::invalid_argument);
  config.variant = Variant::FW_LS_QUAD;
  CHECK_THROWS_AS(fw_solve(lin, basis_point(3, 2), config),
                  std::invalid_argument);
}

TEST_CASE("mixed solver with zero corruption budget recovers the target") {
  Rng rng(229);
  const int n = 5;
  const double tau = 0.8;
  const Eigen::VectorXd x0 = rng.unit_vector(n);
  const SymMatrix m((x0 * x0.transpose()).eval());
  const RpcaObjective f(m, 0.0);

  SolverConfig config;
  config.variant = Variant::MIXED;
  config.max_iters = 4000;
  config.tol = 1e-12;
  MixedPoint start{default_start(f, tau), Eigen::VectorXd::Zero(n * n)};
  const MixedSolveResult res = mixed_solve(f, start, config);

  CHECK((res.point.x.dense().mat() - tau * m.mat()).norm() <= 1e-6);
  CHECK(res.point.y.norm() == 0.0);
  for (const IterateRecord& row : res.trace.rows) {
    CHECK(row.branch == Branch::BOTH);
  }
}

TEST_CASE("mixed solver matches the joint pg oracle") {
  const RpcaInstance inst = gen_rpca(6, 0.25, 0.8, 301);
  const RpcaObjective f(inst.m, inst.s);
  SolverConfig config;
  config.variant = Variant::MIXED;
  config.max_iters = 30000;
  config.tol = 1e-11;
  MixedPoint start{default_start(f, inst.tau),
                   Eigen::VectorXd::Zero(f.y_dim())};
  const MixedSolveResult res = mixed_solve(f, start, config);
  const oracles::MixedAltResult oracle =
      oracles::mixed_alt_minimize(f, inst.tau, 50000);
  CHECK(std::abs(res.f_value - oracle.f) <=
        1e-6 * (1.0 + std::abs(oracle.f)));
}

TEST_CASE("mixed observer passes the current y") {
  const RpcaInstance inst = gen_rpca(4, 0.3, 0.8, 305);
  const RpcaObjective f(inst.m, inst.s);
  SolverConfig config;
  config.variant = Variant::MIXED;
  config.max_iters = 5;
  config.tol = 0.0;
  MixedPoint start{default_start(f, inst.tau),
                   Eigen::VectorXd::Zero(f.y_dim())};
  int calls = 0;
  mixed_solve(f, start, config, [&](const IterationView& view) {
    ++calls;
    REQUIRE(view.y != nullptr);
    CHECK(view.y->size() == f.y_dim());
    if (view.iter == 1) CHECK(view.y->norm() == 0.0);
  });
  CHECK(calls == 5);
}

TEST_CASE("smoothed solver tracks both value sequences") {
  const int n = 4;
  std::vector<MatrixL1Term> terms;
  terms.push_back({1.0, SymMatrix(Eigen::MatrixXd(
                            Eigen::Vector4d(1, 0, 0, 0).asDiagonal()))});
  EntrywiseL1Objective base(n, terms);

  SolverConfig config;
  config.variant = Variant::SMOOTHED_REGFW;
  config.max_iters = 4000;
  config.tol = 0.0;
  config.smoothing_mu = 1e-3;
  config.gap_estimate = 1.0;  // true delta = 2 for this target

  const SolveResult res =
      smoothed_solve(base, SpectraPoint::scaled_identity(n, 1.0), config);
  REQUIRE(res.true_values.size() == res.trace.rows.size());
  const double alpha = 1.0 * n * n * config.smoothing_mu / 2.0;
  // Smoothed and true values stay within alpha of each other.
  for (std::size_t t = 0; t < res.true_values.size(); ++t) {
    CHECK(res.trace.rows[t].f_value <= res.true_values[t] + 1e-12);
    CHECK(res.true_values[t] <= res.trace.rows[t].f_value + alpha + 1e-12);
  }
  CHECK(res.true_values.back() <= 3.0 * alpha + 1e-6);
}

TEST_CASE("solve dispatcher rejects two-block variants") {
  const LinearObjective lin{diag3(0, 1, 2)};
  SolverConfig config;
  config.variant = Variant::MIXED;
  CHECK_THROWS_AS(solve(lin, basis_point(3, 2), config),
                  std::invalid_argument);
  config.variant = Variant::SMOOTHED_REGFW;
  CHECK_THROWS_AS(solve(lin, basis_point(3, 2), config),
                  std::invalid_argument);
}

TEST_CASE("variant names round-trip") {
  for (Variant v : {Variant::FW_LS_EXACT, Variant::FW_LS_QUAD, Variant::FWPG,
                    Variant::REGFW, Variant::REGFW_LS, Variant::MIXED,
                    Variant::SMOOTHED_REGFW}) {
    const auto parsed = variant_from_name(variant_name(v));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == v);
  }
  CHECK_FALSE(variant_from_name("nope").has_value());
}

TEST_CASE("aggressive compaction leaves the optimum unchanged") {
  const QuadMeasInstance inst = small_gapped_instance(233, 5);
  const QuadMeasObjective f = inst.objective();
  SolverConfig config;
  config.variant = Variant::FW_LS_QUAD;
  config.max_iters = 4000;
  config.tol = 1e-10;
  config.compaction_factor = 1;
  const SolveResult res = fw_solve(f, default_start(f, inst.tau), config);
  for (const IterateRecord& row : res.trace.rows) {
    CHECK(row.rank <= 5);
  }
  const oracles::PgResult oracle = oracles::pg_minimize(
      f, inst.tau, Eigen::MatrixXd::Identity(5, 5) * (inst.tau / 5), 60000);
  CHECK(std::abs(res.f_value - oracle.f) <= 1e-6 * (1.0 + std::abs(oracle.f)));
}
