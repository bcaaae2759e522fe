#include "specfw/objective.hpp"

#include "specfw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specfw {

namespace {
constexpr std::uint64_t kPowerSeed = 0xE7037ED1A0B428DBull;
}

double operator_norm_estimate(const LinearMatrixMap& map, double tol,
                              int max_iters) {
  if (!(tol > 0.0) || max_iters < 1) {
    throw std::invalid_argument("operator_norm_estimate: bad parameters");
  }
  Rng rng(stream_seed(kPowerSeed, static_cast<std::uint64_t>(map.image_dim())));
  Eigen::VectorXd w = rng.unit_vector(map.image_dim());
  double lambda = 0.0;
  int settled = 0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd next = map.apply(map.adjoint(w));
    const double nrm = next.norm();
    if (nrm <= 0.0) {
      // w is in the kernel of A^T; restart from a fresh direction.
      w = rng.unit_vector(map.image_dim());
      continue;
    }
    const double rayleigh = w.dot(next);  // = ||A^T w||_F^2 for unit w
    w = next / nrm;
    const double rel = std::abs(rayleigh - lambda) /
                       std::max(std::abs(rayleigh), 1e-300);
    lambda = rayleigh;
    settled = rel <= tol ? settled + 1 : 0;
    if (settled >= 3) {
      return 1.01 * std::sqrt(std::max(lambda, 0.0));
    }
  }
  return map.frobenius_bound();
}

const Eigen::VectorXd& StructuredObjective::g_target() const {
  throw std::logic_error("StructuredObjective: g_target undefined for this g");
}

double StructuredObjective::op_norm() const {
  std::lock_guard<std::mutex> lock(norm_mutex_);
  if (!op_norm_cache_) {
    op_norm_cache_ = operator_norm_estimate(map());
  }
  return *op_norm_cache_;
}

double StructuredObjective::value(const SymMatrix& x) const {
  return g_value(map().apply(x)) + linear_term().dot(x);
}

SymMatrix StructuredObjective::gradient(const SymMatrix& x) const {
  SymMatrix adj = map().adjoint(g_gradient(map().apply(x)));
  return adj + linear_term();
}

std::optional<double> StructuredObjective::exact_step(const SymMatrix& x,
                                                      const SymMatrix& v) const {
  if (!g_quadratic()) return std::nullopt;
  const Eigen::VectorXd zx = map().apply(x);
  const Eigen::VectorXd zv = map().apply(v);
  const Eigen::VectorXd d = zv - zx;
  const double dd = d.squaredNorm();
  const double lin = linear_term().dot(v - x);
  if (dd <= 0.0) return lin < 0.0 ? 1.0 : 0.0;
  const double eta = -((zx - g_target()).dot(d) + lin) / dd;
  return std::clamp(eta, 0.0, 1.0);
}

}  // namespace specfw
