#include "specfw/spectra_point.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace specfw {

namespace {

Eigen::MatrixXd materialize(int n, const std::vector<double>& w,
                            const std::vector<Eigen::VectorXd>& u) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < w.size(); ++i) {
    x.noalias() += w[i] * (u[i] * u[i].transpose());
  }
  return x;
}

}  // namespace

SpectraPoint::SpectraPoint(double scale, std::vector<double> weights,
                           std::vector<Eigen::VectorXd> vectors)
    : scale_(scale), weights_(std::move(weights)), vectors_(std::move(vectors)) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw std::invalid_argument("SpectraPoint: scale must be positive");
  }
  if (weights_.empty() || weights_.size() != vectors_.size()) {
    throw std::invalid_argument("SpectraPoint: weights/vectors size mismatch");
  }
  n_ = static_cast<int>(vectors_.front().size());
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (vectors_[i].size() != n_) {
      throw std::invalid_argument("SpectraPoint: inconsistent vector dimension");
    }
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw std::invalid_argument("SpectraPoint: weights must be positive and finite");
    }
    if (std::abs(vectors_[i].norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("SpectraPoint: component vectors must be unit norm");
    }
    sum += weights_[i];
  }
  if (std::abs(sum - scale_) > 1e-9) {
    std::ostringstream os;
    os << "SpectraPoint: weights sum to " << sum << ", expected " << scale_;
    throw std::invalid_argument(os.str());
  }
  dense_ = SymMatrix(materialize(n_, weights_, vectors_));
}

SpectraPoint SpectraPoint::rank_one(const Eigen::VectorXd& unit, double scale) {
  return SpectraPoint(scale, {scale}, {unit});
}

SpectraPoint SpectraPoint::scaled_identity(int n, double scale) {
  std::vector<double> w(static_cast<std::size_t>(n), scale / n);
  std::vector<Eigen::VectorXd> u;
  u.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    u.push_back(std::move(e));
  }
  return SpectraPoint(scale, std::move(w), std::move(u));
}

SpectraPoint SpectraPoint::compacted() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_.mat());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("SpectraPoint::compacted: eigendecomposition failed");
  }
  std::vector<double> w;
  std::vector<Eigen::VectorXd> u;
  for (int i = n_ - 1; i >= 0; --i) {
    const double ev = es.eigenvalues()[i];
    if (ev > 0.0) {
      w.push_back(ev);
      u.push_back(es.eigenvectors().col(i));
    }
  }
  // Rounding in the eigendecomposition can leave the positive part a hair off
  // the trace bound; rescale so the class invariant stays exact.
  double sum = 0.0;
  for (double wi : w) sum += wi;
  if (sum <= 0.0) {
    throw std::runtime_error("SpectraPoint::compacted: no positive spectrum");
  }
  for (double& wi : w) wi *= scale_ / sum;
  return SpectraPoint(scale_, std::move(w), std::move(u));
}

SpectraPoint SpectraPoint::normalized() const {
  if (scale_ == 1.0) return *this;
  std::vector<double> w = weights_;
  for (double& wi : w) wi /= scale_;
  return SpectraPoint(1.0, std::move(w), vectors_);
}

void SpectraPoint::validate() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw std::logic_error("SpectraPoint: non-positive weight");
    }
    if (std::abs(vectors_[i].norm() - 1.0) > 1e-12) {
      throw std::logic_error("SpectraPoint: component vector drifted off unit norm");
    }
    sum += weights_[i];
  }
  if (std::abs(sum - scale_) > 1e-9) {
    throw std::logic_error("SpectraPoint: weight sum drifted off the trace bound");
  }
  if ((dense_.mat() - materialize(n_, weights_, vectors_)).norm() > 1e-9) {
    throw std::logic_error("SpectraPoint: dense cache out of sync");
  }
}

}  // namespace specfw
