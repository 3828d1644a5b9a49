// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace dce {

enum class Scheme { reciprocal, non_reciprocal };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view text);

double db_to_linear(double db) noexcept;
/// Returns -infinity for zero input.
double linear_to_db(double linear) noexcept;

/// Antenna counts, second-order statistics, training lengths and power limits.
/// All variances and powers are linear.
struct SystemParams {
  int n_t = 4;
  int n_l = 2;
  int n_u = 2;

  double var_h = 1.0;   // reciprocal channel H
  double var_hd = 1.0;  // downlink to LR (non-reciprocal)
  double var_hu = 1.0;  // uplink from LR (non-reciprocal)
  double var_g = 1.0;   // downlink to UR

  double var_w = 1.0;   // LR noise
  double var_wt = 1.0;  // transmitter noise
  double var_v = 1.0;   // UR noise

  int tau_r = 2;
  int tau_f = 4;
  int tau_0 = 4;
  int tau_2 = 2;
  int tau_3 = 4;

  double p_ave = 100.0;     // 20 dB
  double p_bar_t = 1000.0;  // 30 dB
  double p_bar_l = 100.0;   // 20 dB

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;

  /// N_t=4, N_L=N_U=2, unit variances, minimum training lengths,
  /// P̄_t=30 dB, P̄_L=20 dB and the given average power.
  static SystemParams defaults(double p_ave_db = 20.0);

  /// Number of null-space (AN) dimensions, N_t - N_L.
  int an_dims() const noexcept { return n_t - n_l; }
};

/// Training energies and AN variance for one scheme. Unused fields stay zero.
struct PowerAllocation {
  Scheme scheme = Scheme::reciprocal;
  double e_r = 0.0;
  double e_f = 0.0;
  double e_0 = 0.0;
  double e_1 = 0.0;
  double e_2 = 0.0;
  double e_3 = 0.0;
  double var_a = 0.0;

  static PowerAllocation reciprocal(double e_r, double e_f, double var_a);
  static PowerAllocation non_reciprocal(double e_0, double e_1, double e_2, double e_3,
                                        double var_a);

  /// Forward-training energy of whichever scheme is active (E_F or E_3).
  double forward_energy() const noexcept {
    return scheme == Scheme::reciprocal ? e_f : e_3;
  }
  bool non_negative() const noexcept;
};

}  // namespace dce
