// Objective interfaces.
//
// Objective is the minimal contract the solvers need: value, gradient, a
// smoothness constant, and an optional closed-form exact line search.
// StructuredObjective refines it for compositions f(X) = g(A X) + <C, X>
// with g strongly convex and smooth; the linear map is exposed so solvers can
// maintain the image A X incrementally across rank-one updates (O(m n) per
// step instead of re-evaluation) and so the operator norm can be estimated.
#pragma once

#include "specfw/spectra_point.hpp"
#include "specfw/sym_matrix.hpp"

#include <Eigen/Dense>

#include <mutex>
#include <optional>

namespace specfw {

class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual double value(const SymMatrix& x) const = 0;
  virtual SymMatrix gradient(const SymMatrix& x) const = 0;

  /// Smoothness constant (Lipschitz constant of the gradient). Objectives
  /// without curvature (linear) return 0 and rely on config overrides where a
  /// positive beta is required.
  virtual double beta() const = 0;

  /// Exact minimizer of eta -> f((1-eta) x + eta v) over [0, 1] when a closed
  /// form exists; nullopt otherwise (callers fall back to golden section).
  virtual std::optional<double> exact_step(const SymMatrix& x,
                                           const SymMatrix& v) const {
    (void)x;
    (void)v;
    return std::nullopt;
  }

  double value(const SpectraPoint& x) const { return value(x.dense()); }
  SymMatrix gradient(const SpectraPoint& x) const { return gradient(x.dense()); }
};

/// Linear map A from symmetric n x n matrices to R^p, with adjoint.
class LinearMatrixMap {
 public:
  virtual ~LinearMatrixMap() = default;

  virtual int dim() const = 0;        // n
  virtual int image_dim() const = 0;  // p

  virtual Eigen::VectorXd apply(const SymMatrix& x) const = 0;
  /// A(w v v^T) for unit v; the cheap path behind incremental image updates.
  virtual Eigen::VectorXd apply_rank_one(const Eigen::VectorXd& v,
                                         double w) const = 0;
  virtual SymMatrix adjoint(const Eigen::VectorXd& z) const = 0;

  /// Closed-form upper bound ||A||_F >= ||A||, used as the fallback when the
  /// power iteration in operator_norm_estimate stalls.
  virtual double frobenius_bound() const = 0;
};

/// ||A|| = max_{|x|_2 = 1} ||A^T x||_F via power iteration on A A^T in the
/// image space, inflated by a 1.01 safety factor. Falls back to the map's
/// Frobenius bound if the iteration fails to settle within max_iters.
double operator_norm_estimate(const LinearMatrixMap& map, double tol = 1e-6,
                              int max_iters = 1000);

class StructuredObjective : public Objective {
 public:
  StructuredObjective() = default;
  StructuredObjective(const StructuredObjective& other) : Objective(other) {
    std::lock_guard<std::mutex> lock(other.norm_mutex_);
    op_norm_cache_ = other.op_norm_cache_;
  }
  StructuredObjective& operator=(const StructuredObjective& other) {
    if (this != &other) {
      std::scoped_lock lock(norm_mutex_, other.norm_mutex_);
      op_norm_cache_ = other.op_norm_cache_;
    }
    return *this;
  }

  virtual const LinearMatrixMap& map() const = 0;
  virtual double g_value(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd g_gradient(const Eigen::VectorXd& z) const = 0;
  virtual double alpha_g() const = 0;
  virtual double beta_g() const = 0;
  virtual const SymMatrix& linear_term() const = 0;  // C

  /// True when g(z) = 0.5 ||z - g_target()||^2, enabling closed-form exact
  /// line search in image space.
  virtual bool g_quadratic() const { return false; }
  virtual const Eigen::VectorXd& g_target() const;

  /// Cached ||A|| estimate (computed on first use; thread-safe).
  virtual double op_norm() const;

  int dim() const override { return map().dim(); }
  double value(const SymMatrix& x) const override;
  SymMatrix gradient(const SymMatrix& x) const override;
  double beta() const override { return beta_g() * op_norm() * op_norm(); }

  std::optional<double> exact_step(const SymMatrix& x,
                                   const SymMatrix& v) const override;

  using Objective::gradient;
  using Objective::value;

 private:
  mutable std::mutex norm_mutex_;
  mutable std::optional<double> op_norm_cache_;
};

}  // namespace specfw
