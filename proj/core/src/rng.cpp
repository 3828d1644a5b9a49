// SPDX-License-Identifier: Apache-2.0
#include "dce/rng.hpp"

#include <cmath>

namespace dce {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t master, std::uint64_t substream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(substream),
                    static_cast<std::uint32_t>(substream >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seeded_engine(seed, ~0ULL)) {}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t substream)
    : engine_(seeded_engine(master_seed, substream)) {}

Complex RandomStream::complex_gaussian(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {s * re, s * im};
}

CMatrix RandomStream::gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance) {
  CMatrix m(rows, cols);
  // Column-major fill keeps draw order independent of Eigen expression evaluation.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian(variance);
  return m;
}

CMatrix RandomStream::haar_unitary(Eigen::Index n) {
  // QR of a Ginibre matrix with the phases of R's diagonal folded back into Q.
  const CMatrix z = gaussian_matrix(n, n, 1.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

double RandomStream::uniform() { return uniform_(engine_); }

}  // namespace dce
