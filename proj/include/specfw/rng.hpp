// Seeded, portable random number generation.
//
// All randomness in the library flows through SplitMix64, a 64-bit generator
// with a one-word state and a fixed, platform-independent output sequence.
// Gaussian variates use the Marsaglia polar method instead of
// std::normal_distribution, whose output is not pinned by the C++ standard.
//
// Stream splitting: a master seed s owns derived streams
//     stream_seed(s, k) = scramble(s ^ (k + 1) * 0x9E3779B97F4A7C15)
// where scramble is one splitmix64 output step. Streams in use:
//     0  instance data (measurement pairs, ground truth, corruption pattern)
//     1  observation noise
//     2  solver start vectors / initialization anchors
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace specfw {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += kGolden64;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ ((stream + 1) * kGolden64);
  return splitmix64_next(s);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  result_type operator()() { return splitmix64_next(state_); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

 private:
  std::uint64_t state_;
};

/// Deterministic sampler over a SplitMix64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0, 1), 53 mantissa bits of the raw draw.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Standard normal via the polar method (two draws cached pairwise).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double mul = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * mul;
    has_spare_ = true;
    return u * mul;
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = gaussian();
    return x;
  }

  /// Uniform direction on the unit sphere.
  Eigen::VectorXd unit_vector(int n) {
    Eigen::VectorXd x = gaussian_vector(n);
    double nrm = x.norm();
    while (nrm == 0.0) {  // astronomically unlikely; redraw for safety
      x = gaussian_vector(n);
      nrm = x.norm();
    }
    return x / nrm;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  SplitMix64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace specfw
