#include "specfw/objectives.hpp"

#include "oracles.hpp"
#include "specfw/rng.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <memory>

using namespace specfw;

namespace {

SymMatrix random_sym(Rng& rng, int n, double scale = 1.0) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = scale * rng.gaussian();
  }
  return SymMatrix(m);
}

QuadMeasObjective random_quad_meas(Rng& rng, int n, int m) {
  Eigen::MatrixXd a(m, n), b(m, n);
  for (int i = 0; i < m; ++i) {
    a.row(i) = rng.unit_vector(n).transpose();
    b.row(i) = rng.unit_vector(n).transpose();
  }
  return QuadMeasObjective(a, b, rng.gaussian_vector(m));
}

}  // namespace

TEST_CASE("linear objective basics") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -2;
  const LinearObjective f{SymMatrix(d)};
  CHECK(f.beta() == 0.0);
  CHECK(f.value(SymMatrix::identity(2)) == doctest::Approx(-1.0));
  CHECK((f.gradient(SymMatrix::identity(2)).mat() - d).norm() == 0.0);
  // Endpoint line search: move iff the direction descends.
  CHECK(*f.exact_step(SymMatrix::identity(2), SymMatrix::zero(2)) == 0.0);
  CHECK(*f.exact_step(SymMatrix::zero(2), SymMatrix::identity(2)) == 1.0);
}

TEST_CASE("quad-meas hand value") {
  // One pair a=e1, b=e2, observation 1, X = I/2: residual -1, value 1/2.
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 1, 0;
  b << 0, 1;
  Eigen::VectorXd y(1);
  y << 1.0;
  const QuadMeasObjective f(a, b, y);
  CHECK(f.value(SymMatrix::identity(2).scaled(0.5)) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quad-meas gradient against finite differences") {
  Rng rng(51);
  const QuadMeasObjective f = random_quad_meas(rng, 5, 14);
  const SymMatrix x = random_sym(rng, 5);
  const SymMatrix g = f.gradient(x);
  for (int trial = 0; trial < 8; ++trial) {
    const SymMatrix d = random_sym(rng, 5);
    const double fd = oracles::fd_directional(f, x, d);
    const double an = g.dot(d);
    CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(an)));
  }
}

TEST_CASE("quad-meas smoothness constant upper-bounds the curvature") {
  Rng rng(53);
  const QuadMeasObjective f = random_quad_meas(rng, 4, 20);
  const double beta = f.beta();
  CHECK(beta > 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix x = random_sym(rng, 4);
    const SymMatrix y = random_sym(rng, 4);
    const SymMatrix diff = y - x;
    const double lhs = f.value(y);
    const double rhs = f.value(x) + f.gradient(x).dot(diff) +
                       0.5 * beta * diff.frobenius() * diff.frobenius();
    CHECK(lhs <= rhs + 1e-9 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("closed-form exact step matches a grid search") {
  Rng rng(57);
  const QuadMeasObjective f = random_quad_meas(rng, 4, 16);
  for (int trial = 0; trial < 6; ++trial) {
    const SymMatrix x = random_sym(rng, 4);
    const SymMatrix v = random_sym(rng, 4);
    const auto step = f.exact_step(x, v);
    REQUIRE(step.has_value());
    const double oracle = oracles::grid_line_min([&](double t) {
      return f.value(SymMatrix(((1.0 - t) * x.mat() + t * v.mat()).eval()));
    });
    const double f_step =
        f.value(SymMatrix(((1.0 - *step) * x.mat() + *step * v.mat()).eval()));
    const double f_oracle =
        f.value(SymMatrix(((1.0 - oracle) * x.mat() + oracle * v.mat()).eval()));
    CHECK(f_step <= f_oracle + 1e-9 * (1.0 + std::abs(f_oracle)));
  }
}

TEST_CASE("incremental image path equals direct application") {
  Rng rng(59);
  const QuadMeasObjective f = random_quad_meas(rng, 5, 11);
  const Eigen::VectorXd v = rng.unit_vector(5);
  const double w = 1.7;
  const SymMatrix rank_one((w * (v * v.transpose())).eval());
  const Eigen::VectorXd direct = f.map().apply(rank_one);
  const Eigen::VectorXd fast = f.map().apply_rank_one(v, w);
  CHECK((direct - fast).norm() <= 1e-12 * (1.0 + direct.norm()));
}

TEST_CASE("map adjoint identity <A(X), z> = <X, A*(z)>") {
  Rng rng(61);
  const QuadMeasObjective f = random_quad_meas(rng, 4, 9);
  const SymMatrix x = random_sym(rng, 4);
  const Eigen::VectorXd z = rng.gaussian_vector(9);
  const double lhs = f.map().apply(x).dot(z);
  const double rhs = f.map().adjoint(z).dot(x);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("rpca objective value and gradients") {
  Rng rng(63);
  const int n = 4;
  const SymMatrix m = random_sym(rng, n);
  const RpcaObjective f(m, 1.5);
  CHECK(f.dim() == n);
  CHECK(f.y_dim() == n * n);
  CHECK(f.l1_radius() == 1.5);
  CHECK(f.diameter_k() == 3.0);
  CHECK(f.op_norm() == 1.0);

  const SymMatrix x = random_sym(rng, n);
  const Eigen::VectorXd y = rng.gaussian_vector(n * n);

  const Eigen::VectorXd z = f.map().apply(x) + y;
  CHECK(f.value(x, y) == doctest::Approx(f.g_value(z)).epsilon(1e-12));

  // grad_x against finite differences in X.
  const SymMatrix gx = f.grad_x(x, y);
  for (int trial = 0; trial < 5; ++trial) {
    const SymMatrix d = random_sym(rng, n);
    const double h = 1e-6;
    const double fd = (f.value(SymMatrix(x.mat() + h * d.mat()), y) -
                       f.value(SymMatrix(x.mat() - h * d.mat()), y)) /
                      (2.0 * h);
    CHECK(std::abs(fd - gx.dot(d)) <= 1e-5 * (1.0 + std::abs(fd)));
  }

  // grad_y against finite differences in y.
  const Eigen::VectorXd gy = f.grad_y(x, y);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd d = rng.gaussian_vector(n * n);
    const double h = 1e-6;
    const double fd =
        (f.value(x, y + h * d) - f.value(x, y - h * d)) / (2.0 * h);
    CHECK(std::abs(fd - gy.dot(d)) <= 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("huber hand values") {
  CHECK(huber_value(0.5, 1.0) == doctest::Approx(0.125));
  CHECK(huber_value(2.0, 1.0) == doctest::Approx(1.5));
  CHECK(huber_value(-2.0, 1.0) == doctest::Approx(1.5));
  CHECK(huber_grad(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(huber_grad(2.0, 1.0) == doctest::Approx(1.0));
  CHECK(huber_grad(-2.0, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("huber smoothing approximates within alpha") {
  Rng rng(67);
  const int n = 4;
  const double mu = 1e-2;
  std::vector<MatrixL1Term> terms;
  terms.push_back({1.0, SymMatrix::identity(n).scaled(0.25)});
  terms.push_back({0.5, SymMatrix::zero(n)});
  auto base = std::make_shared<EntrywiseL1Objective>(n, terms);
  const SmoothedObjective smooth = huber_smooth_l1(base, mu);

  const double alpha = smooth.alpha();
  CHECK(alpha == doctest::Approx(1.5 * n * n * mu / 2.0).epsilon(1e-12));
  CHECK(smooth.beta() == doctest::Approx(1.5 / mu).epsilon(1e-12));

  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix x = random_sym(rng, n);
    const double truth = base->value(x);
    const double approx = smooth.value(x);
    CHECK(smooth.true_value(x) == truth);
    CHECK(approx <= truth + 1e-12);
    CHECK(truth <= approx + alpha + 1e-12);
  }
}

TEST_CASE("smoothed gradient against finite differences") {
  Rng rng(71);
  const int n = 3;
  std::vector<MatrixL1Term> terms;
  terms.push_back({0.8, random_sym(rng, n)});
  auto base = std::make_shared<EntrywiseL1Objective>(n, terms);
  const SmoothedObjective smooth = huber_smooth_l1(base, 0.05);

  const SymMatrix x = random_sym(rng, n);
  const SymMatrix g = smooth.gradient(x);
  for (int trial = 0; trial < 6; ++trial) {
    const SymMatrix d = random_sym(rng, n);
    const double fd = oracles::fd_directional(smooth, x, d, 1e-7);
    CHECK(std::abs(fd - g.dot(d)) <= 1e-4 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("smoothing with a smooth part adds betas") {
  Rng rng(73);
  const int n = 3;
  auto quad = std::make_shared<QuadMeasObjective>(random_quad_meas(rng, n, 8));
  std::vector<MatrixL1Term> terms;
  terms.push_back({2.0, SymMatrix::zero(n)});
  auto base = std::make_shared<EntrywiseL1Objective>(n, terms, quad);
  const double mu = 0.1;
  const SmoothedObjective smooth = huber_smooth_l1(base, mu);
  CHECK(smooth.beta() ==
        doctest::Approx(quad->beta() + 2.0 / mu).epsilon(1e-12));

  const SymMatrix x = random_sym(rng, n);
  CHECK(smooth.true_value(x) ==
        doctest::Approx(quad->value(x) + 2.0 * x.mat().cwiseAbs().sum())
            .epsilon(1e-12));
}

TEST_CASE("operator norm estimate bounds the map") {
  Rng rng(77);
  const QuadMeasObjective f = random_quad_meas(rng, 5, 25);
  const double nrm = f.op_norm();
  for (int trial = 0; trial < 10; ++trial) {
    SymMatrix x = random_sym(rng, 5);
    x = x.scaled(1.0 / x.frobenius());
    CHECK(f.map().apply(x).norm() <= nrm * (1.0 + 1e-9));
  }
}
