#include "specfw/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace specfw {

// --------------------------------------------------------------------------
// QuadMeasMap

QuadMeasMap::QuadMeasMap(Eigen::MatrixXd a, Eigen::MatrixXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != b_.rows() || a_.cols() != b_.cols() || a_.rows() < 1) {
    throw std::invalid_argument("QuadMeasMap: a/b shape mismatch");
  }
}

Eigen::VectorXd QuadMeasMap::apply(const SymMatrix& x) const {
  // z_i = a_i^T X b_i = row_i(A X) . row_i(B)
  return ((a_ * x.mat()).array() * b_.array()).rowwise().sum();
}

Eigen::VectorXd QuadMeasMap::apply_rank_one(const Eigen::VectorXd& v,
                                            double w) const {
  return w * ((a_ * v).array() * (b_ * v).array()).matrix();
}

SymMatrix QuadMeasMap::adjoint(const Eigen::VectorXd& z) const {
  // sum_i z_i sym(a_i b_i^T); SymMatrix construction symmetrizes.
  Eigen::MatrixXd m = a_.transpose() * (z.asDiagonal() * b_);
  return SymMatrix(m);
}

double QuadMeasMap::frobenius_bound() const {
  // ||sym(a b^T)||_F^2 = (|a|^2 |b|^2 + (a.b)^2) / 2
  double total = 0.0;
  for (int i = 0; i < a_.rows(); ++i) {
    const double aa = a_.row(i).squaredNorm();
    const double bb = b_.row(i).squaredNorm();
    const double ab = a_.row(i).dot(b_.row(i));
    total += 0.5 * (aa * bb + ab * ab);
  }
  return std::sqrt(total);
}

QuadMeasObjective::QuadMeasObjective(Eigen::MatrixXd a, Eigen::MatrixXd b,
                                     Eigen::VectorXd y)
    : map_(std::move(a), std::move(b)), y_(std::move(y)) {
  if (y_.size() != map_.image_dim()) {
    throw std::invalid_argument("QuadMeasObjective: y length mismatch");
  }
  c_ = SymMatrix::zero(map_.dim());
}

// --------------------------------------------------------------------------
// SymVecMap / RpcaObjective

Eigen::VectorXd SymVecMap::apply(const SymMatrix& x) const {
  if (x.n() != n_) throw std::invalid_argument("SymVecMap: dimension mismatch");
  Eigen::VectorXd z(n_ * n_);
  for (int i = 0; i < n_; ++i) {
    z.segment(i * n_, n_) = x.mat().row(i);
  }
  return z;
}

Eigen::VectorXd SymVecMap::apply_rank_one(const Eigen::VectorXd& v,
                                          double w) const {
  Eigen::VectorXd z(n_ * n_);
  for (int i = 0; i < n_; ++i) {
    z.segment(i * n_, n_) = (w * v[i]) * v;
  }
  return z;
}

SymMatrix SymVecMap::adjoint(const Eigen::VectorXd& z) const {
  if (z.size() != n_ * n_) throw std::invalid_argument("SymVecMap: bad length");
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i) m.row(i) = z.segment(i * n_, n_);
  return SymMatrix(m);  // symmetrizes, i.e. the true adjoint on S_n
}

double SymVecMap::frobenius_bound() const { return n_; }

RpcaObjective::RpcaObjective(SymMatrix m, double s)
    : m_(std::move(m)), s_(s), map_(m_.n()) {
  if (s_ < 0.0 || !std::isfinite(s_)) {
    throw std::invalid_argument("RpcaObjective: corruption budget must be >= 0");
  }
  target_ = map_.apply(m_);
  c_ = SymMatrix::zero(m_.n());
  cy_ = Eigen::VectorXd::Zero(map_.image_dim());
}

// --------------------------------------------------------------------------
// MixedObjective

const Eigen::VectorXd& MixedObjective::g_target() const {
  throw std::logic_error("MixedObjective: g_target undefined for this g");
}

double MixedObjective::op_norm() const {
  return operator_norm_estimate(map());
}

double MixedObjective::value(const SymMatrix& x, const Eigen::VectorXd& y) const {
  return g_value(map().apply(x) + y) + linear_term().dot(x) +
         y_linear_term().dot(y);
}

SymMatrix MixedObjective::grad_x(const SymMatrix& x,
                                 const Eigen::VectorXd& y) const {
  SymMatrix adj = map().adjoint(g_gradient(map().apply(x) + y));
  return adj + linear_term();
}

Eigen::VectorXd MixedObjective::grad_y(const SymMatrix& x,
                                       const Eigen::VectorXd& y) const {
  return g_gradient(map().apply(x) + y) + y_linear_term();
}

// --------------------------------------------------------------------------
// Huber smoothing

double huber_value(double x, double mu) {
  const double a = std::abs(x);
  return a <= mu ? x * x / (2.0 * mu) : a - mu / 2.0;
}

double huber_grad(double x, double mu) {
  if (x > mu) return 1.0;
  if (x < -mu) return -1.0;
  return x / mu;
}

EntrywiseL1Objective::EntrywiseL1Objective(
    int n, std::vector<MatrixL1Term> terms,
    std::shared_ptr<const Objective> smooth_part)
    : n_(n), terms_(std::move(terms)), smooth_(std::move(smooth_part)) {
  if (n_ < 1) throw std::invalid_argument("EntrywiseL1Objective: bad dimension");
  if (terms_.empty()) {
    throw std::invalid_argument("EntrywiseL1Objective: needs at least one l1 term");
  }
  for (const auto& t : terms_) {
    if (!(t.weight > 0.0)) {
      throw std::invalid_argument("EntrywiseL1Objective: term weights must be > 0");
    }
    if (t.target.n() != n_) {
      throw std::invalid_argument("EntrywiseL1Objective: term dimension mismatch");
    }
  }
  if (smooth_ && smooth_->dim() != n_) {
    throw std::invalid_argument("EntrywiseL1Objective: smooth part dimension mismatch");
  }
}

double EntrywiseL1Objective::value(const SymMatrix& x) const {
  double v = smooth_ ? smooth_->value(x) : 0.0;
  for (const auto& t : terms_) {
    v += t.weight * (x.mat() - t.target.mat()).cwiseAbs().sum();
  }
  return v;
}

SmoothedObjective::SmoothedObjective(
    std::shared_ptr<const EntrywiseL1Objective> base, double mu)
    : base_(std::move(base)), mu_(mu) {
  if (!base_) throw std::invalid_argument("SmoothedObjective: null base");
  if (!(mu_ > 0.0)) throw std::invalid_argument("SmoothedObjective: mu must be > 0");
}

double SmoothedObjective::value(const SymMatrix& x) const {
  double v = base_->smooth_part() ? base_->smooth_part()->value(x) : 0.0;
  for (const auto& t : base_->terms()) {
    const Eigen::MatrixXd d = x.mat() - t.target.mat();
    double acc = 0.0;
    for (int j = 0; j < d.cols(); ++j) {
      for (int i = 0; i < d.rows(); ++i) acc += huber_value(d(i, j), mu_);
    }
    v += t.weight * acc;
  }
  return v;
}

SymMatrix SmoothedObjective::gradient(const SymMatrix& x) const {
  Eigen::MatrixXd g = base_->smooth_part()
                          ? base_->smooth_part()->gradient(x).mat()
                          : Eigen::MatrixXd::Zero(dim(), dim()).eval();
  for (const auto& t : base_->terms()) {
    const Eigen::MatrixXd d = x.mat() - t.target.mat();
    for (int j = 0; j < d.cols(); ++j) {
      for (int i = 0; i < d.rows(); ++i) {
        g(i, j) += t.weight * huber_grad(d(i, j), mu_);
      }
    }
  }
  return SymMatrix(g);
}

double SmoothedObjective::beta() const {
  double w = 0.0;
  for (const auto& t : base_->terms()) w += t.weight;
  const double smooth_beta =
      base_->smooth_part() ? base_->smooth_part()->beta() : 0.0;
  return smooth_beta + w / mu_;
}

double SmoothedObjective::alpha() const {
  double w = 0.0;
  for (const auto& t : base_->terms()) w += t.weight;
  const int n = dim();
  return w * n * n * mu_ / 2.0;
}

SmoothedObjective huber_smooth_l1(std::shared_ptr<const EntrywiseL1Objective> base,
                                  double mu) {
  return SmoothedObjective(std::move(base), mu);
}

}  // namespace specfw
