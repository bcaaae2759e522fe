// Factored point of a (scaled) spectrahedron.
//
// A SpectraPoint holds X = sum_i w_i u_i u_i^T with every w_i > 0, every u_i
// unit-norm, and sum_i w_i equal to the trace bound `scale` (1 for the unit
// spectrahedron, tau or 1+zeta for scaled sets). The dense materialization is
// computed once at construction; instances are immutable.
#pragma once

#include "specfw/sym_matrix.hpp"

#include <Eigen/Dense>

#include <vector>

namespace specfw {

class SpectraPoint {
 public:
  /// Validates and stores the factored form. Throws std::invalid_argument if
  /// scale <= 0, weights and vectors disagree in length or dimension, any
  /// weight is <= 0 or non-finite, any vector is not unit-norm to 1e-12, or
  /// the weights do not sum to scale within 1e-9.
  SpectraPoint(double scale, std::vector<double> weights,
               std::vector<Eigen::VectorXd> vectors);

  static SpectraPoint rank_one(const Eigen::VectorXd& unit, double scale);

  /// scale/n on each coordinate direction.
  static SpectraPoint scaled_identity(int n, double scale);

  double scale() const { return scale_; }
  int dim() const { return n_; }
  int rank() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& vectors() const { return vectors_; }
  const SymMatrix& dense() const { return dense_; }

  /// Re-eigendecomposes the dense materialization and keeps the positive
  /// eigenvalue components. Used when the factored form has grown long; the
  /// dense matrix is preserved to 1e-10.
  SpectraPoint compacted() const;

  /// X with scale 1 (all weights divided by scale).
  SpectraPoint normalized() const;

  /// Re-checks every invariant; throws std::logic_error on violation.
  void validate() const;

 private:
  double scale_ = 1.0;
  int n_ = 0;
  std::vector<double> weights_;
  std::vector<Eigen::VectorXd> vectors_;
  SymMatrix dense_;
};

}  // namespace specfw
