#include "specfw/instances.hpp"

#include "specfw/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace specfw {

QuadMeasInstance gen_quad_meas(int n, int m, double c, double tau,
                               std::uint64_t seed) {
  if (n < 1 || m < 1 || c < 0.0 || !(tau > 0.0)) {
    throw std::invalid_argument("gen_quad_meas: bad parameters");
  }
  QuadMeasInstance inst;
  inst.n = n;
  inst.m = m;
  inst.c = c;
  inst.tau = tau;
  inst.seed = seed;

  Rng data(stream_seed(seed, 0));
  inst.x0 = std::sqrt(static_cast<double>(n)) * data.unit_vector(n);
  inst.a.resize(m, n);
  inst.b.resize(m, n);
  for (int i = 0; i < m; ++i) {
    inst.a.row(i) = data.unit_vector(n).transpose();
    inst.b.row(i) = data.unit_vector(n).transpose();
  }
  inst.y0.resize(m);
  for (int i = 0; i < m; ++i) {
    inst.y0[i] = inst.a.row(i).dot(inst.x0) * inst.b.row(i).dot(inst.x0);
  }

  if (c > 0.0) {
    Rng noise(stream_seed(seed, 1));
    const Eigen::VectorXd g = noise.gaussian_vector(m);
    inst.y = inst.y0 + std::sqrt(c) * g;
    inst.snr = inst.y0.squaredNorm() / (c * g.squaredNorm());
  } else {
    inst.y = inst.y0;
    inst.snr = std::numeric_limits<double>::infinity();
  }
  return inst;
}

RpcaInstance gen_rpca(int n, double p, double tau, std::uint64_t seed) {
  if (n < 1 || p < 0.0 || p >= 1.0 || !(tau > 0.0)) {
    throw std::invalid_argument("gen_rpca: bad parameters");
  }
  RpcaInstance inst;
  inst.n = n;
  inst.tau = tau;
  inst.seed = seed;

  Rng data(stream_seed(seed, 0));
  inst.x0 = data.unit_vector(n);
  Eigen::MatrixXd y0 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (data.uniform01() < p) {
        y0(i, j) = data.uniform01() < 0.5 ? 1.0 : -1.0;
      }
    }
  }
  const Eigen::MatrixXd corruption = 0.5 * (y0 + y0.transpose());
  inst.m = SymMatrix(inst.x0 * inst.x0.transpose() + corruption);
  inst.s = corruption.cwiseAbs().sum();
  const double noise_energy = corruption.squaredNorm();
  inst.snr = noise_energy > 0.0 ? 1.0 / noise_energy
                                : std::numeric_limits<double>::infinity();
  return inst;
}

nlohmann::json quad_meas_json(const QuadMeasInstance& inst) {
  nlohmann::json pairs = nlohmann::json::array();
  for (int i = 0; i < inst.m; ++i) {
    const Eigen::VectorXd ar = inst.a.row(i);
    const Eigen::VectorXd br = inst.b.row(i);
    pairs.push_back(nlohmann::json{
        {"a", std::vector<double>(ar.data(), ar.data() + ar.size())},
        {"b", std::vector<double>(br.data(), br.data() + br.size())},
    });
  }
  return nlohmann::json{
      {"n", inst.n},
      {"m", inst.m},
      {"pairs", std::move(pairs)},
      {"y", std::vector<double>(inst.y.data(), inst.y.data() + inst.y.size())},
      {"seed", inst.seed},
      {"c", inst.c},
      {"tau", inst.tau},
  };
}

QuadMeasInstance quad_meas_from_json(const nlohmann::json& j) {
  QuadMeasInstance inst;
  inst.n = j.at("n").get<int>();
  inst.m = j.at("m").get<int>();
  inst.c = j.at("c").get<double>();
  inst.tau = j.at("tau").get<double>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  const auto& pairs = j.at("pairs");
  if (static_cast<int>(pairs.size()) != inst.m) {
    throw std::runtime_error("quad-meas json: pair count mismatch");
  }
  inst.a.resize(inst.m, inst.n);
  inst.b.resize(inst.m, inst.n);
  for (int i = 0; i < inst.m; ++i) {
    auto a = pairs[i].at("a").get<std::vector<double>>();
    auto b = pairs[i].at("b").get<std::vector<double>>();
    if (static_cast<int>(a.size()) != inst.n ||
        static_cast<int>(b.size()) != inst.n) {
      throw std::runtime_error("quad-meas json: vector length mismatch");
    }
    inst.a.row(i) = Eigen::Map<const Eigen::VectorXd>(a.data(), inst.n);
    inst.b.row(i) = Eigen::Map<const Eigen::VectorXd>(b.data(), inst.n);
  }
  auto y = j.at("y").get<std::vector<double>>();
  if (static_cast<int>(y.size()) != inst.m) {
    throw std::runtime_error("quad-meas json: observation length mismatch");
  }
  inst.y = Eigen::Map<const Eigen::VectorXd>(y.data(), inst.m);
  inst.snr = std::numeric_limits<double>::quiet_NaN();
  return inst;
}

nlohmann::json rpca_json(const RpcaInstance& inst) {
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(inst.n) * inst.n);
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) entries.push_back(inst.m(i, j));
  }
  return nlohmann::json{
      {"n", inst.n}, {"M", std::move(entries)},    {"s", inst.s},
      {"tau", inst.tau}, {"seed", inst.seed},
  };
}

RpcaInstance rpca_from_json(const nlohmann::json& j) {
  RpcaInstance inst;
  inst.n = j.at("n").get<int>();
  inst.s = j.at("s").get<double>();
  inst.tau = j.at("tau").get<double>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  auto entries = j.at("M").get<std::vector<double>>();
  if (entries.size() != static_cast<std::size_t>(inst.n) * inst.n) {
    throw std::runtime_error("rpca json: entry count mismatch");
  }
  Eigen::MatrixXd m(inst.n, inst.n);
  for (int i = 0; i < inst.n; ++i) {
    for (int k = 0; k < inst.n; ++k) m(i, k) = entries[i * inst.n + k];
  }
  inst.m = SymMatrix(m);
  inst.snr = std::numeric_limits<double>::quiet_NaN();
  return inst;
}

InstanceKind instance_kind(const nlohmann::json& j) {
  if (j.contains("pairs")) return InstanceKind::QUAD_MEAS;
  if (j.contains("M")) return InstanceKind::RPCA;
  throw std::runtime_error("instance json: unrecognized schema");
}

}  // namespace specfw
