// Shipped objective families.
//
//  * LinearObjective        f(X) = <A, X>
//  * QuadMeasObjective      f(X) = 0.5 sum_i (a_i^T X b_i - y_i)^2
//  * RpcaObjective          f(X, y) = 0.5 || X + mat(y) - M ||_F^2 over
//                           X in tau*S_n, ||y||_1 <= s  (two-block form)
//  * huber_smooth_l1        entrywise-l1 objectives smoothed to (alpha, beta)
//                           accuracy with the Huber function
#pragma once

#include "specfw/objective.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace specfw {

class LinearObjective final : public Objective {
 public:
  explicit LinearObjective(SymMatrix a) : a_(std::move(a)) {}

  int dim() const override { return a_.n(); }
  double value(const SymMatrix& x) const override { return a_.dot(x); }
  SymMatrix gradient(const SymMatrix&) const override { return a_; }
  double beta() const override { return 0.0; }  // no curvature

  std::optional<double> exact_step(const SymMatrix& x,
                                   const SymMatrix& v) const override {
    return a_.dot(v - x) < 0.0 ? 1.0 : 0.0;
  }

  using Objective::gradient;
  using Objective::value;

 private:
  SymMatrix a_;
};

/// Bilinear measurement map X -> (a_i^T X b_i)_i for stacked unit-vector rows.
class QuadMeasMap final : public LinearMatrixMap {
 public:
  QuadMeasMap(Eigen::MatrixXd a, Eigen::MatrixXd b);

  int dim() const override { return static_cast<int>(a_.cols()); }
  int image_dim() const override { return static_cast<int>(a_.rows()); }
  Eigen::VectorXd apply(const SymMatrix& x) const override;
  Eigen::VectorXd apply_rank_one(const Eigen::VectorXd& v, double w) const override;
  SymMatrix adjoint(const Eigen::VectorXd& z) const override;
  double frobenius_bound() const override;

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }

 private:
  Eigen::MatrixXd a_, b_;  // m x n, rows are the measurement vectors
};

class QuadMeasObjective final : public StructuredObjective {
 public:
  /// Rows of a and b are the measurement pairs; y holds the observations.
  QuadMeasObjective(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::VectorXd y);

  const LinearMatrixMap& map() const override { return map_; }
  double g_value(const Eigen::VectorXd& z) const override {
    return 0.5 * (z - y_).squaredNorm();
  }
  Eigen::VectorXd g_gradient(const Eigen::VectorXd& z) const override {
    return z - y_;
  }
  double alpha_g() const override { return 1.0; }
  double beta_g() const override { return 1.0; }
  const SymMatrix& linear_term() const override { return c_; }
  bool g_quadratic() const override { return true; }
  const Eigen::VectorXd& g_target() const override { return y_; }

  int measurements() const { return map_.image_dim(); }
  const QuadMeasMap& meas_map() const { return map_; }
  const Eigen::VectorXd& observations() const { return y_; }

 private:
  QuadMeasMap map_;
  Eigen::VectorXd y_;
  SymMatrix c_;
};

/// Symmetric vectorization map (row-major), the identity embedding of S_n
/// into R^(n*n). Its operator norm is exactly 1.
class SymVecMap final : public LinearMatrixMap {
 public:
  explicit SymVecMap(int n) : n_(n) {}

  int dim() const override { return n_; }
  int image_dim() const override { return n_ * n_; }
  Eigen::VectorXd apply(const SymMatrix& x) const override;
  Eigen::VectorXd apply_rank_one(const Eigen::VectorXd& v, double w) const override;
  SymMatrix adjoint(const Eigen::VectorXd& z) const override;
  double frobenius_bound() const override;

 private:
  int n_;
};

/// Two-block objective f(X, y) = g(A X + y) + <C, X> + <c, y> with the second
/// block constrained to the l1 ball of radius s.
class MixedObjective {
 public:
  virtual ~MixedObjective() = default;

  virtual int dim() const = 0;
  int y_dim() const { return map().image_dim(); }
  virtual const LinearMatrixMap& map() const = 0;
  virtual double g_value(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd g_gradient(const Eigen::VectorXd& z) const = 0;
  virtual double alpha_g() const = 0;
  virtual double beta_g() const = 0;
  virtual const SymMatrix& linear_term() const = 0;        // C
  virtual const Eigen::VectorXd& y_linear_term() const = 0;  // c
  virtual double l1_radius() const = 0;                    // s >= 0
  double diameter_k() const { return 2.0 * l1_radius(); }

  virtual bool g_quadratic() const { return false; }
  virtual const Eigen::VectorXd& g_target() const;
  virtual double op_norm() const;

  double value(const SymMatrix& x, const Eigen::VectorXd& y) const;
  SymMatrix grad_x(const SymMatrix& x, const Eigen::VectorXd& y) const;
  Eigen::VectorXd grad_y(const SymMatrix& x, const Eigen::VectorXd& y) const;
};

class RpcaObjective final : public MixedObjective {
 public:
  /// Observed matrix m, corruption budget s (entrywise l1).
  RpcaObjective(SymMatrix m, double s);

  int dim() const override { return m_.n(); }
  const LinearMatrixMap& map() const override { return map_; }
  double g_value(const Eigen::VectorXd& z) const override {
    return 0.5 * (z - target_).squaredNorm();
  }
  Eigen::VectorXd g_gradient(const Eigen::VectorXd& z) const override {
    return z - target_;
  }
  double alpha_g() const override { return 1.0; }
  double beta_g() const override { return 1.0; }
  const SymMatrix& linear_term() const override { return c_; }
  const Eigen::VectorXd& y_linear_term() const override { return cy_; }
  double l1_radius() const override { return s_; }
  bool g_quadratic() const override { return true; }
  const Eigen::VectorXd& g_target() const override { return target_; }
  double op_norm() const override { return 1.0; }

  const SymMatrix& observed() const { return m_; }

 private:
  SymMatrix m_;
  double s_;
  SymVecMap map_;
  Eigen::VectorXd target_;  // vec(M)
  SymMatrix c_;
  Eigen::VectorXd cy_;
};

// ---------------------------------------------------------------------------
// Entrywise-l1 objectives and Huber smoothing.

double huber_value(double x, double mu);
double huber_grad(double x, double mu);

struct MatrixL1Term {
  double weight;     // > 0
  SymMatrix target;  // f contribution: weight * ||X - target||_1 (entrywise)
};

/// Nonsmooth objective: optional smooth part plus weighted entrywise-l1 terms.
class EntrywiseL1Objective {
 public:
  EntrywiseL1Objective(int n, std::vector<MatrixL1Term> terms,
                       std::shared_ptr<const Objective> smooth_part = nullptr);

  int dim() const { return n_; }
  double value(const SymMatrix& x) const;
  const std::vector<MatrixL1Term>& terms() const { return terms_; }
  const std::shared_ptr<const Objective>& smooth_part() const { return smooth_; }

 private:
  int n_;
  std::vector<MatrixL1Term> terms_;
  std::shared_ptr<const Objective> smooth_;
};

/// (alpha, beta)-smooth approximation of an EntrywiseL1Objective: each
/// |.| becomes the Huber function at width mu. alpha = sum_k w_k n^2 mu / 2;
/// beta = smooth part's beta + (sum_k w_k) / mu.
class SmoothedObjective final : public Objective {
 public:
  SmoothedObjective(std::shared_ptr<const EntrywiseL1Objective> base, double mu);

  int dim() const override { return base_->dim(); }
  double value(const SymMatrix& x) const override;
  SymMatrix gradient(const SymMatrix& x) const override;
  double beta() const override;

  double mu() const { return mu_; }
  double alpha() const;
  /// Value of the underlying nonsmooth objective.
  double true_value(const SymMatrix& x) const { return base_->value(x); }
  const EntrywiseL1Objective& base() const { return *base_; }

  using Objective::gradient;
  using Objective::value;

 private:
  std::shared_ptr<const EntrywiseL1Objective> base_;
  double mu_;
};

SmoothedObjective huber_smooth_l1(std::shared_ptr<const EntrywiseL1Objective> base,
                                  double mu);

}  // namespace specfw
