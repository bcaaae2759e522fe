#include "specfw/diagnostics.hpp"

#include "specfw/eigs.hpp"
#include "specfw/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace specfw {

GapReport grad_eigengap(const SymMatrix& grad, int r, double eigen_tol,
                        int eigen_max_iters) {
  const int n = grad.n();
  if (r < 1 || r >= n) {
    throw std::invalid_argument("grad_eigengap: need 1 <= r < n");
  }
  SymMatrix neg((-grad.mat()).eval());
  auto pairs = top_k_eigenpairs(neg, r + 1, eigen_tol, eigen_max_iters);
  GapReport rep;
  rep.n = n;
  rep.r = r;
  rep.lambda_min = -pairs[0].value;
  rep.lambda_second = -pairs[1].value;
  rep.delta = std::max(0.0, pairs[0].value - pairs[1].value);
  rep.delta_r = std::max(0.0, pairs[0].value - pairs[r].value);
  return rep;
}

double quadratic_growth_check(const std::vector<SpectraPoint>& points,
                              const std::vector<double>& f_values,
                              const SpectraPoint& x_star, double f_star,
                              double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("quadratic_growth_check: delta must be > 0");
  }
  if (points.size() != f_values.size()) {
    throw std::invalid_argument(
        "quadratic_growth_check: points and f_values lengths differ");
  }
  const double tau = x_star.scale();
  const double factor = 2.0 * tau / delta;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SpectraPoint& p = points[i];
    if (p.dim() != x_star.dim() ||
        std::abs(p.scale() - tau) > 1e-9 * std::max(1.0, tau)) {
      throw std::invalid_argument(
          "quadratic_growth_check: sample point off the optimum's set");
    }
    if (f_values[i] < f_star - 1e-6 * (1.0 + std::abs(f_star))) {
      throw std::invalid_argument(
          "quadratic_growth_check: f_star exceeds a sampled value");
    }
    const double dist = (p.dense() - x_star.dense()).frobenius();
    worst = std::max(worst, dist * dist - factor * (f_values[i] - f_star));
  }
  return worst;
}

RankRobustnessReport rank_robustness(const SpectraPoint& x_star,
                                     const SymMatrix& grad_star, double beta,
                                     int r, double zeta) {
  const int n = grad_star.n();
  if (!(beta > 0.0)) {
    throw std::invalid_argument("rank_robustness: beta must be > 0");
  }
  if (zeta < 0.0) {
    throw std::invalid_argument("rank_robustness: zeta must be >= 0");
  }
  if (r < 1 || r >= n) {
    throw std::invalid_argument("rank_robustness: need 1 <= r < n");
  }
  if (n != x_star.dim()) {
    throw std::invalid_argument("rank_robustness: dimension mismatch");
  }
  const double tau = x_star.scale();
  SymMatrix target((x_star.dense().mat() - grad_star.mat() / beta).eval());
  SpectraPoint projected =
      project_scaled_spectrahedron(target, (1.0 + zeta) * tau);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(grad_star.mat(),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("rank_robustness: eigendecomposition failed");
  }
  const Eigen::VectorXd& mu_asc = es.eigenvalues();  // mu_n first
  double sum = 0.0;
  for (int i = 0; i < r; ++i) sum += mu_asc[r] - mu_asc[i];

  RankRobustnessReport rep;
  rep.rank = projected.rank();
  rep.threshold = sum / (beta * tau);
  rep.zeta = zeta;
  return rep;
}

ProximityReport davis_kahan_proximity(const Eigen::VectorXd& v,
                                      const SpectraPoint& x_star,
                                      double grad_dist, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("davis_kahan_proximity: delta must be > 0");
  }
  if (grad_dist < 0.0) {
    throw std::invalid_argument("davis_kahan_proximity: grad_dist must be >= 0");
  }
  if (v.size() != x_star.dim()) {
    throw std::invalid_argument("davis_kahan_proximity: dimension mismatch");
  }
  const Eigen::MatrixXd diff =
      v * v.transpose() - x_star.dense().mat() / x_star.scale();
  ProximityReport rep;
  rep.lhs = diff.squaredNorm();
  rep.rhs = 8.0 * grad_dist * grad_dist / (delta * delta);
  return rep;
}

double spectral_norm(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral_norm: eigendecomposition failed");
  }
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

}  // namespace specfw
