// Certificates for the rank-one regime.
//
// Everything here works on the scaled set tau * S_n. Reports use the raw
// (unnormalized) gradient spectrum; the scale enters only where the bound
// itself changes under scaling (quadratic growth, rank robustness).
#pragma once

#include "specfw/spectra_point.hpp"
#include "specfw/sym_matrix.hpp"

#include <Eigen/Dense>

#include <vector>

namespace specfw {

/// Bottom-of-spectrum summary of a gradient matrix at (or near) the optimum.
/// delta   = lambda_{n-1} - lambda_n, the rank-one certificate;
/// delta_r = lambda_{n-r} - lambda_n, its rank-r analogue.
struct GapReport {
  int n = 0;
  int r = 1;
  double lambda_min = 0.0;     // lambda_n(grad)
  double lambda_second = 0.0;  // lambda_{n-1}(grad)
  double delta = 0.0;
  double delta_r = 0.0;
};

/// Computed from the top r+1 eigenpairs of -grad, so it stays cheap at the
/// dimensions the experiments run at. Requires 1 <= r < n.
GapReport grad_eigengap(const SymMatrix& grad, int r = 1,
                        double eigen_tol = 1e-9, int eigen_max_iters = 100000);

/// Worst value of ||X - X*||_F^2 - (2 tau / delta)(f(X) - f_star) over the
/// samples; <= 0 everywhere means quadratic growth held. f_values must align
/// with points, and f_star must not exceed their minimum (oracle optimum).
double quadratic_growth_check(const std::vector<SpectraPoint>& points,
                              const std::vector<double>& f_values,
                              const SpectraPoint& x_star, double f_star,
                              double delta);

/// Rank of Pi_{(1+zeta) tau S_n}[X* - grad/beta] plus the largest zeta for
/// which that projection keeps rank <= r:
///   threshold = sum_{i=n-r+1..n} (mu_{n-r} - mu_i) / (beta tau),
/// mu_1 >= ... >= mu_n the eigenvalues of grad_star. The formula assumes the
/// first-order pairing at an optimum (X*'s range spans the bottom-r
/// eigenvectors of grad_star).
struct RankRobustnessReport {
  int rank = 0;
  double threshold = 0.0;
  double zeta = 0.0;
};

RankRobustnessReport rank_robustness(const SpectraPoint& x_star,
                                     const SymMatrix& grad_star, double beta,
                                     int r, double zeta);

/// Proximity bound for a FW vertex v at X: the normalized rank-one iterate
/// satisfies ||v v^T - X*/tau||_F^2 <= 8 grad_dist^2 / delta^2, grad_dist the
/// spectral-norm distance between the gradients at X and at the optimum.
struct ProximityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double tol = 1e-8) const { return lhs <= rhs + tol; }
};

ProximityReport davis_kahan_proximity(const Eigen::VectorXd& v,
                                      const SpectraPoint& x_star,
                                      double grad_dist, double delta);

/// Largest absolute eigenvalue (dense decomposition).
double spectral_norm(const SymMatrix& m);

}  // namespace specfw
