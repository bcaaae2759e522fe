// Euclidean projections used by the solvers and diagnostics.
//
// All three share the same water-filling pivot: given values sorted in
// descending order and a positive budget, find the unique sigma with
// sum_i max(0, value_i - sigma) = budget.
#pragma once

#include "specfw/spectra_point.hpp"
#include "specfw/sym_matrix.hpp"

#include <Eigen/Dense>

namespace specfw {

/// Unique sigma with sum_i max(0, eigs[i] - sigma) = total.
/// `eigs_desc` must be sorted in descending order; total must be > 0.
double simplex_threshold(const Eigen::VectorXd& eigs_desc, double total);

/// Frobenius projection of m onto {X psd, tr X = scale}. The result carries
/// only the strictly positive water-filled components, so its rank equals the
/// number of positive weights.
SpectraPoint project_scaled_spectrahedron(const SymMatrix& m, double scale);

/// Frobenius projection onto the l1 ball of the given radius. Inputs already
/// inside the ball are returned unchanged (exact equality).
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

}  // namespace specfw
