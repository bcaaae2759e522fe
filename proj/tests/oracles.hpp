// Independent reference implementations for the tests. Nothing here shares
// algorithmic code with the library: eigendecompositions go through a
// hand-rolled cyclic Jacobi sweep, projections through enumeration/bisection,
// and optima through long projected-gradient runs using those primitives.
#pragma once

#include "specfw/objective.hpp"
#include "specfw/objectives.hpp"
#include "specfw/sym_matrix.hpp"

#include <Eigen/Dense>

#include <functional>

namespace oracles {

struct JacobiResult {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns, same order
};

/// Cyclic Jacobi rotations until the off-diagonal mass is below tol.
JacobiResult jacobi_eigs(Eigen::MatrixXd a, double tol = 1e-14,
                         int max_sweeps = 200);

/// Euclidean projection onto {X >= 0, tr X = scale} by enumerating the
/// active-set size of the water-filling threshold.
Eigen::MatrixXd project_spectrahedron(const Eigen::MatrixXd& sym,
                                      double scale);

/// Euclidean projection onto the l1 ball by bisecting the soft threshold.
Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double radius);

struct PgResult {
  Eigen::MatrixXd x;
  double f = 0.0;
  int iters = 0;
};

/// Long projected-gradient run with step 1/beta and stall detection; the
/// returned f is a high-accuracy optimum for gapped objectives.
PgResult pg_minimize(const specfw::Objective& f, double tau,
                     const Eigen::MatrixXd& x0, int max_iters = 200000,
                     double stall_tol = 1e-15);

struct MixedAltResult {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  double f = 0.0;
  int iters = 0;
};

/// Exact alternating block minimization for the two-block quadratic
/// f(X, y) = 0.5 || A X + y - t ||^2 with A the symmetric-vectorization map:
/// each block minimizer is a closed-form projection, so the iteration is a
/// coordinate-minimization scheme that converges to the joint optimum.
MixedAltResult mixed_alt_minimize(const specfw::MixedObjective& f, double tau,
                                  int max_iters = 100000,
                                  double stall_tol = 1e-15);

/// Central-difference directional derivative of f at x along d.
double fd_directional(const specfw::Objective& f, const specfw::SymMatrix& x,
                      const specfw::SymMatrix& d, double h = 1e-6);

/// Minimizer of a scalar function over [0, 1]: coarse grid plus ternary
/// refinement.
double grid_line_min(const std::function<double(double)>& f,
                     int coarse = 4001);

}  // namespace oracles
