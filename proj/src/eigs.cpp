#include "specfw/eigs.hpp"

#include "specfw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specfw {

void fix_sign(Eigen::VectorXd& v) {
  int idx = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      idx = i;
    }
  }
  if (v[idx] < 0.0) v = -v;
}

namespace {

constexpr int kDenseCutoff = 64;
constexpr std::uint64_t kStartSeed = 0xA0761D6478BD642Full;

Eigen::VectorXd start_vector(int n, std::uint64_t salt) {
  Rng rng(stream_seed(kStartSeed ^ salt, static_cast<std::uint64_t>(n)));
  return rng.unit_vector(n);
}

std::vector<EigenPair> dense_top_k(const SymMatrix& m, int k, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("dense eigendecomposition failed");
  }
  const int n = m.n();
  // Exact spectral norm is available here; the residual contract uses it.
  const double spectral =
      std::max(std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[n - 1]));
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    EigenPair p;
    p.value = es.eigenvalues()[n - 1 - j];
    p.vector = es.eigenvectors().col(n - 1 - j);
    fix_sign(p.vector);
    if (spectral > 0.0) {
      const double resid = (m.mat() * p.vector - p.value * p.vector).norm();
      if (resid > tol * spectral) {
        throw EigenIterationError("dense eigensolve above residual tolerance",
                                  resid);
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

void orthogonalize(Eigen::VectorXd& w, const std::vector<EigenPair>& locked,
                   const Eigen::MatrixXd& q, int cols) {
  for (const auto& p : locked) w -= p.vector.dot(w) * p.vector;
  if (cols > 0) {
    auto basis = q.leftCols(cols);
    w.noalias() -= basis * (basis.transpose() * w);
  }
}

// One Lanczos cycle against already-locked pairs. Returns the top Ritz pair
// and the residual estimate; consumed matvecs are charged to `budget`.
struct CycleResult {
  bool converged = false;
  EigenPair pair;
  double residual = std::numeric_limits<double>::infinity();
};

CycleResult lanczos_cycle(const SymMatrix& m, const std::vector<EigenPair>& locked,
                          Eigen::VectorXd q0, double tol, int& budget) {
  const int n = m.n();
  const int dim_left = n - static_cast<int>(locked.size());
  const int m_max = std::min(dim_left, 60);
  Eigen::MatrixXd q(n, m_max);
  Eigen::VectorXd alpha(m_max), beta(m_max);

  CycleResult res;
  orthogonalize(q0, locked, q, 0);
  double nrm = q0.norm();
  if (nrm < 1e-300) return res;  // start vector swallowed by locked space
  q.col(0) = q0 / nrm;

  int steps = 0;
  for (int j = 0; j < m_max && budget > 0; ++j) {
    --budget;
    Eigen::VectorXd w = m.mat().selfadjointView<Eigen::Lower>() * q.col(j);
    if (j > 0) w -= beta[j - 1] * q.col(j - 1);
    alpha[j] = q.col(j).dot(w);
    w -= alpha[j] * q.col(j);
    // Full reorthogonalization, twice, against both the basis and any locked
    // eigenvectors; this is what keeps Ritz vectors orthogonal in practice.
    orthogonalize(w, locked, q, j + 1);
    orthogonalize(w, locked, q, j + 1);
    beta[j] = w.norm();
    steps = j + 1;

    // Ritz extraction from the tridiagonal section.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(t);
    const double theta = tes.eigenvalues()[steps - 1];
    const Eigen::VectorXd s = tes.eigenvectors().col(steps - 1);
    const double spectral_scale =
        std::max({std::abs(tes.eigenvalues()[0]), std::abs(theta), 1e-300});
    const double ritz_resid = std::abs(beta[j] * s[steps - 1]);

    const bool breakdown = beta[j] <= 1e-14 * spectral_scale;
    if (ritz_resid <= tol * spectral_scale || breakdown || j + 1 == m_max) {
      Eigen::VectorXd v = q.leftCols(steps) * s;
      orthogonalize(v, locked, q, 0);
      const double vn = v.norm();
      if (vn < 1e-300) return res;
      v /= vn;
      if (budget > 0) {
        --budget;
        const double true_resid =
            (m.mat().selfadjointView<Eigen::Lower>() * v - theta * v).norm();
        res.residual = true_resid;
        if (true_resid <= tol * std::max(spectral_scale, 1e-300)) {
          fix_sign(v);
          res.converged = true;
          res.pair = {theta, std::move(v)};
          return res;
        }
      }
      if (breakdown || j + 1 == m_max) {
        // Restart material: hand the best Ritz vector back to the caller.
        fix_sign(v);
        res.pair = {theta, std::move(v)};
        return res;
      }
    }
    if (beta[j] <= 1e-300) break;
    if (j + 1 < m_max) q.col(j + 1) = w / beta[j];
  }
  return res;
}

EigenPair lanczos_top1(const SymMatrix& m, const std::vector<EigenPair>& locked,
                       double tol, int& budget) {
  Eigen::VectorXd q0 = start_vector(m.n(), locked.size());
  double last_residual = std::numeric_limits<double>::infinity();
  int salt = 1;
  while (budget > 0) {
    CycleResult cycle = lanczos_cycle(m, locked, q0, tol, budget);
    if (cycle.converged) return cycle.pair;
    last_residual = std::min(last_residual, cycle.residual);
    if (cycle.pair.vector.size() > 0) {
      q0 = cycle.pair.vector;  // explicit restart from the best Ritz vector
    } else {
      q0 = start_vector(m.n(), locked.size() + 1000 + salt++);
    }
  }
  throw EigenIterationError(
      "leading eigenpair: matvec budget exhausted before tolerance",
      last_residual);
}

}  // namespace

EigenPair leading_eigenvector(const SymMatrix& m, double tol, int max_iters) {
  return top_k_eigenpairs(m, 1, tol, max_iters).front();
}

std::vector<EigenPair> top_k_eigenpairs(const SymMatrix& m, int k, double tol,
                                        int max_iters) {
  const int n = m.n();
  if (k < 1 || k > n) throw std::invalid_argument("top_k_eigenpairs: bad k");
  if (!(tol > 0.0)) throw std::invalid_argument("top_k_eigenpairs: tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("top_k_eigenpairs: bad budget");

  if (n <= kDenseCutoff) {
    return dense_top_k(m, k, tol);
  }

  int budget = max_iters;
  std::vector<EigenPair> locked;
  locked.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    locked.push_back(lanczos_top1(m, locked, tol, budget));
  }
  return locked;
}

}  // namespace specfw
