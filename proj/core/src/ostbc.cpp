// SPDX-License-Identifier: Apache-2.0
#include "dce/ostbc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dce {

QamConstellation::QamConstellation(int order) : order_(order) {
  if (order != 4 && order != 16 && order != 64) {
    throw std::invalid_argument("QAM order must be 4, 16 or 64");
  }
  side_ = static_cast<int>(std::lround(std::sqrt(order)));
  scale_ = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
}

Complex QamConstellation::symbol(int index) const {
  const int re = index % side_;
  const int im = index / side_;
  return {scale_ * (2 * re - (side_ - 1)), scale_ * (2 * im - (side_ - 1))};
}

int QamConstellation::nearest(Complex z) const {
  auto level = [this](double v) {
    const long idx = std::lround((v / scale_ + (side_ - 1)) / 2.0);
    return static_cast<int>(std::clamp(idx, 0L, static_cast<long>(side_ - 1)));
  };
  return level(z.real()) + side_ * level(z.imag());
}

int QamConstellation::random_index(RandomStream& rng) const {
  return static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(order_));
}

CMatrix ostbc_rate34(const std::array<Complex, 3>& s) {
  const Complex z{0.0, 0.0};
  CMatrix c(4, 4);
  c << s[0], s[1], s[2], z,
       -std::conj(s[1]), std::conj(s[0]), z, s[2],
       std::conj(s[2]), z, -std::conj(s[0]), s[1],
       z, std::conj(s[2]), -std::conj(s[1]), -s[0];
  return c;
}

std::array<Complex, 3> ostbc_combine(const CMatrix& received, const CMatrix& channel_estimate,
                                     double power) {
  const double amp = std::sqrt(power / 3.0);
  const Eigen::Index cells = received.size();
  Eigen::MatrixXd f(2 * cells, 6);
  for (int k = 0; k < 6; ++k) {
    std::array<Complex, 3> basis{};
    basis[static_cast<std::size_t>(k / 2)] = k % 2 == 0 ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
    const CMatrix col = amp * ostbc_rate34(basis) * channel_estimate;
    const auto flat = col.reshaped();
    f.col(k).head(cells) = flat.real();
    f.col(k).tail(cells) = flat.imag();
  }
  Eigen::VectorXd y(2 * cells);
  const auto flat = received.reshaped();
  y.head(cells) = flat.real();
  y.tail(cells) = flat.imag();
  const Eigen::VectorXd x = f.colPivHouseholderQr().solve(y);
  return {Complex{x(0), x(1)}, Complex{x(2), x(3)}, Complex{x(4), x(5)}};
}

}  // namespace dce
