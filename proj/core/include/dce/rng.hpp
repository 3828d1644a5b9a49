// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dce {

using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Seeded source of all randomness in a simulation. One stream per trial,
/// derived from (master seed, trial index), keeps results independent of
/// how trials are scheduled across workers.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t master_seed, std::uint64_t substream);

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_gaussian(double variance = 1.0);
  CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);
  /// Haar-distributed n x n unitary matrix.
  CMatrix haar_unitary(Eigen::Index n);
  double uniform();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline RandomStream make_rng(std::uint64_t seed) { return RandomStream(seed); }

}  // namespace dce
