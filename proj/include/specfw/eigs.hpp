// Extreme eigenpairs of symmetric matrices.
//
// The solvers only ever need a few pairs from the top of the spectrum, so the
// implementation switches on size: dense tridiagonal-QR for n <= 64, Lanczos
// with full reorthogonalization (and explicit restarts) above. Start vectors
// for the iterative path are derived from a fixed internal seed mixed with the
// matrix order, making results independent of call site and run order.
//
// Returned eigenvectors are unit norm with the sign convention that the
// largest-magnitude entry is positive (first such index on ties). On return,
// ||M v - value v||_2 <= tol * ||M||_2 holds for every pair.
#pragma once

#include "specfw/sym_matrix.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace specfw {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Thrown when the iteration budget is exhausted before the residual bound is
/// met; carries the last observed residual for post-mortems.
class EigenIterationError : public std::runtime_error {
 public:
  EigenIterationError(const std::string& what, double residual)
      : std::runtime_error(what), last_residual_(residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// Eigenpair of the algebraically largest eigenvalue.
/// max_iters bounds the total number of matrix-vector products.
EigenPair leading_eigenvector(const SymMatrix& m, double tol = 1e-9,
                              int max_iters = 100000);

/// Top k eigenpairs in descending eigenvalue order, pairwise orthogonal to
/// 1e-8. Requires 1 <= k <= n.
std::vector<EigenPair> top_k_eigenpairs(const SymMatrix& m, int k,
                                        double tol = 1e-9,
                                        int max_iters = 100000);

/// Flips v in place so its largest-magnitude entry is positive.
void fix_sign(Eigen::VectorXd& v);

}  // namespace specfw
