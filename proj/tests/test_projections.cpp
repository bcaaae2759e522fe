#include "specfw/projections.hpp"

#include "oracles.hpp"
#include "specfw/rng.hpp"
#include "specfw/spectra_point.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

using namespace specfw;

namespace {

SymMatrix random_sym(Rng& rng, int n, double scale = 1.0) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = scale * rng.gaussian();
  }
  return SymMatrix(m);
}

}  // namespace

TEST_CASE("simplex threshold hand value") {
  Eigen::VectorXd eigs(3);
  eigs << 1.0, -1.0, -2.0;
  CHECK(simplex_threshold(eigs, 3.0) == doctest::Approx(-1.5).epsilon(1e-14));
}

TEST_CASE("simplex threshold conserves mass") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.raw() % 7);
    Eigen::VectorXd eigs = 3.0 * rng.gaussian_vector(n);
    std::sort(eigs.data(), eigs.data() + n, std::greater<>());
    const double scale = 0.25 + 3.0 * rng.uniform01();
    const double sigma = simplex_threshold(eigs, scale);
    const double mass = (eigs.array() - sigma).max(0.0).sum();
    CHECK(mass == doctest::Approx(scale).epsilon(1e-12));
  }
}

TEST_CASE("spectrahedron projection matches the enumeration oracle") {
  Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.raw() % 7);
    const double scale = (trial % 3 == 0) ? 1.0 : 0.25 + 3.0 * rng.uniform01();
    const SymMatrix m = random_sym(rng, n, 2.0);

    const SpectraPoint p = project_scaled_spectrahedron(m, scale);
    const Eigen::MatrixXd oracle = oracles::project_spectrahedron(m.mat(), scale);
    CHECK((p.dense().mat() - oracle).norm() <= 1e-9 * (1.0 + oracle.norm()));

    p.validate();
    CHECK(p.scale() == doctest::Approx(scale).epsilon(1e-12));
    CHECK(p.dense().trace() == doctest::Approx(scale).epsilon(1e-9));
    for (double w : p.weights()) CHECK(w > 0.0);
  }
}

TEST_CASE("projection is idempotent on feasible points") {
  Rng rng(31);
  const int n = 5;
  const double scale = 2.0;
  // A random point of the scaled spectrahedron, built from soft-thresholded
  // squared Gaussians.
  Eigen::VectorXd w = rng.gaussian_vector(n).cwiseAbs2();
  w *= scale / w.sum();
  Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::NullaryExpr(
                                                n, n,
                                                [&](Eigen::Index, Eigen::Index) {
                                                  return rng.gaussian();
                                                }))
          .householderQ();
  const SymMatrix x(q * w.asDiagonal() * q.transpose());
  const SpectraPoint p = project_scaled_spectrahedron(x, scale);
  CHECK((p.dense().mat() - x.mat()).norm() <= 1e-9);
}

TEST_CASE("projection of a dominant rank-one direction") {
  Rng rng(37);
  const int n = 6;
  const Eigen::VectorXd u = rng.unit_vector(n);
  const SymMatrix m((5.0 * (u * u.transpose())).eval());
  const SpectraPoint p = project_scaled_spectrahedron(m, 1.0);
  REQUIRE(p.weights().size() == 1);
  CHECK(p.weights()[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((p.dense().mat() - u * u.transpose()).norm() <= 1e-9);
}

TEST_CASE("l1 ball projection matches the bisection oracle") {
  Rng rng(43);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + static_cast<int>(rng.raw() % 12);
    Eigen::VectorXd v = rng.gaussian_vector(n) * 2.0;
    const double radius = 0.2 + 2.5 * rng.uniform01();
    const Eigen::VectorXd got = project_l1_ball(v, radius);
    const Eigen::VectorXd oracle = oracles::project_l1(v, radius);
    CHECK((got - oracle).norm() <= 1e-9 * (1.0 + oracle.norm()));
    CHECK(got.lpNorm<1>() <= radius + 1e-9);
  }
}

TEST_CASE("l1 projection is the identity inside the ball") {
  Eigen::VectorXd v(3);
  v << 0.5, -0.25, 0.1;
  const Eigen::VectorXd got = project_l1_ball(v, 1.0);
  CHECK((got - v).norm() == 0.0);
}

TEST_CASE("l1 projection hand value") {
  // v = (3, -1), radius 2: threshold t = 1, result (2, 0).
  Eigen::VectorXd v(2);
  v << 3.0, -1.0;
  const Eigen::VectorXd got = project_l1_ball(v, 2.0);
  CHECK(got(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(got(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projection argument validation") {
  CHECK_THROWS_AS(project_scaled_spectrahedron(SymMatrix::identity(2), 0.0),
                  std::invalid_argument);
  Eigen::VectorXd v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(project_l1_ball(v, 0.0), std::invalid_argument);
}
