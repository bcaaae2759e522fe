#include "specfw/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace specfw {

double simplex_threshold(const Eigen::VectorXd& eigs_desc, double total) {
  const int n = static_cast<int>(eigs_desc.size());
  if (n == 0) throw std::invalid_argument("simplex_threshold: empty input");
  if (!(total > 0.0)) throw std::invalid_argument("simplex_threshold: total must be > 0");
  for (int i = 0; i + 1 < n; ++i) {
    if (eigs_desc[i] < eigs_desc[i + 1]) {
      throw std::invalid_argument("simplex_threshold: input not descending");
    }
  }
  // Largest active-set size k with eigs[k-1] above the pivot for that k.
  double prefix = 0.0;
  double sigma = eigs_desc[0] - total;
  for (int k = 1; k <= n; ++k) {
    prefix += eigs_desc[k - 1];
    const double cand = (prefix - total) / k;
    if (eigs_desc[k - 1] - cand > 0.0) {
      sigma = cand;
    } else {
      break;
    }
  }
  return sigma;
}

SpectraPoint project_scaled_spectrahedron(const SymMatrix& m, double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("project_scaled_spectrahedron: scale must be > 0");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("project_scaled_spectrahedron: eigensolve failed");
  }
  const int n = m.n();
  Eigen::VectorXd desc(n);
  for (int i = 0; i < n; ++i) desc[i] = es.eigenvalues()[n - 1 - i];
  const double sigma = simplex_threshold(desc, scale);

  std::vector<double> w;
  std::vector<Eigen::VectorXd> u;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wi = desc[i] - sigma;
    if (wi > 0.0) {
      w.push_back(wi);
      Eigen::VectorXd v = es.eigenvectors().col(n - 1 - i);
      u.push_back(std::move(v));
      sum += wi;
    }
  }
  // Guard the trace-bound invariant against pivot rounding.
  for (double& wi : w) wi *= scale / sum;
  return SpectraPoint(scale, std::move(w), std::move(u));
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("project_l1_ball: radius must be > 0");
  }
  if (v.lpNorm<1>() <= radius) return v;
  Eigen::VectorXd mags = v.cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  const double theta = simplex_threshold(mags, radius);
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double shrunk = std::abs(v[i]) - theta;
    out[i] = shrunk > 0.0 ? (v[i] < 0.0 ? -shrunk : shrunk) : 0.0;
  }
  return out;
}

}  // namespace specfw
