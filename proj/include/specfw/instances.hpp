// Seeded synthetic instances for the two recovery experiments.
//
// Draw order is part of the interface (it pins byte-level reproducibility):
//   quad-meas, instance stream: ground truth direction v0, then the
//       measurement pairs a_1, b_1, a_2, b_2, ..., a_m, b_m (all unit);
//       noise stream: m standard Gaussians.
//   rpca, instance stream: ground truth direction x0, then the corruption
//       pattern row-major (one uniform per entry; entries under p draw a
//       second uniform for the sign).
// Ground truth and SNR live only in memory; serialized instances carry just
// what a solver needs plus the seed.
#pragma once

#include "specfw/objectives.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdint>

namespace specfw {

struct QuadMeasInstance {
  int n = 0;
  int m = 0;
  double c = 0.0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd a, b;  // m x n, rows are measurement vectors
  Eigen::VectorXd y;     // noisy observations

  // Generation-only fields; empty/NaN on instances loaded from JSON.
  Eigen::VectorXd x0;  // sqrt(n) * v0
  Eigen::VectorXd y0;  // clean observations
  double snr = 0.0;    // ||y0||^2 / ||sqrt(c) noise||^2, +inf when c = 0

  QuadMeasObjective objective() const { return QuadMeasObjective(a, b, y); }
};

QuadMeasInstance gen_quad_meas(int n, int m, double c, double tau,
                               std::uint64_t seed);

struct RpcaInstance {
  int n = 0;
  double s = 0.0;  // l1 budget, set from the drawn corruption
  double tau = 0.0;
  std::uint64_t seed = 0;
  SymMatrix m;

  Eigen::VectorXd x0;  // unit ground truth; empty on loaded instances
  double snr = 0.0;    // 1 / ||corruption||_F^2, +inf when no corruption

  RpcaObjective objective() const { return RpcaObjective(m, s); }
};

RpcaInstance gen_rpca(int n, double p, double tau, std::uint64_t seed);

/// {"n", "m", "pairs": [{"a": [...], "b": [...]}, ...], "y", "seed", "c", "tau"}
nlohmann::json quad_meas_json(const QuadMeasInstance& inst);
QuadMeasInstance quad_meas_from_json(const nlohmann::json& j);

/// {"n", "M" (row-major), "s", "tau", "seed"}
nlohmann::json rpca_json(const RpcaInstance& inst);
RpcaInstance rpca_from_json(const nlohmann::json& j);

/// Schema sniffing for `solve --instance`: "pairs" key means quad-meas, "M"
/// means rpca.
enum class InstanceKind { QUAD_MEAS, RPCA };
InstanceKind instance_kind(const nlohmann::json& j);

}  // namespace specfw
