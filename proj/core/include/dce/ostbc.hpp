// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "dce/rng.hpp"

namespace dce {

/// Square M-QAM with unit average symbol energy.
class QamConstellation {
 public:
  /// Throws std::invalid_argument unless order is 4, 16 or 64.
  explicit QamConstellation(int order);

  int order() const noexcept { return order_; }
  Complex symbol(int index) const;
  int nearest(Complex z) const;
  int random_index(RandomStream& rng) const;

 private:
  int order_;
  int side_;
  double scale_;
};

/// Rate-3/4 complex orthogonal design for 4 antennas, 4 slots, 3 symbols:
///
///   [  s1    s2    s3    0  ]
///   [ -s2*   s1*   0     s3 ]
///   [  s3*   0    -s1*   s2 ]
///   [  0     s3*  -s2*  -s1 ]
///
/// rows are time slots, columns antennas; C^H C = (|s1|^2+|s2|^2+|s3|^2) I.
CMatrix ostbc_rate34(const std::array<Complex, 3>& symbols);

/// Linear OSTBC combiner: least squares on the real-valued equivalent model
/// built from `channel_estimate` (N_t x N_R) for Y = sqrt(power/3) C H + N.
std::array<Complex, 3> ostbc_combine(const CMatrix& received, const CMatrix& channel_estimate,
                                     double power);

}  // namespace dce
