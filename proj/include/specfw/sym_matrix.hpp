// Symmetric dense matrix value type.
//
// Storage is a full Eigen matrix symmetrized on construction, so
// m(i, j) == m(j, i) holds exactly and every entry is finite. All matrix
// arguments crossing the library's public interfaces use this type.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace specfw {

class SymMatrix {
 public:
  SymMatrix() = default;

  /// Builds from a square matrix; the stored value is (m + m^T)/2.
  /// Throws std::invalid_argument on non-square or non-finite input.
  explicit SymMatrix(const Eigen::MatrixXd& m) { assign(m); }

  static SymMatrix zero(int n) {
    SymMatrix s;
    s.m_ = Eigen::MatrixXd::Zero(n, n);
    return s;
  }

  static SymMatrix identity(int n) {
    SymMatrix s;
    s.m_ = Eigen::MatrixXd::Identity(n, n);
    return s;
  }

  int n() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace(); }
  double frobenius() const { return m_.norm(); }

  /// Trace inner product <this, other>.
  double dot(const SymMatrix& other) const {
    return (m_.array() * other.m_.array()).sum();
  }

  SymMatrix operator-(const SymMatrix& other) const {
    SymMatrix s;
    s.m_ = m_ - other.m_;
    return s;
  }

  SymMatrix operator+(const SymMatrix& other) const {
    SymMatrix s;
    s.m_ = m_ + other.m_;
    return s;
  }

  SymMatrix scaled(double a) const {
    SymMatrix s;
    s.m_ = a * m_;
    return s;
  }

 private:
  void assign(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("SymMatrix: input must be square");
    }
    m_ = 0.5 * (m + m.transpose());
    if (!m_.allFinite()) {
      throw std::invalid_argument("SymMatrix: input has non-finite entries");
    }
  }

  Eigen::MatrixXd m_;
};

}  // namespace specfw
