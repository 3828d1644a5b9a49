// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "dce/model.hpp"

namespace dce {

enum class JensenVariant { printed, sigma_squared };

std::string_view to_string(JensenVariant variant) noexcept;
JensenVariant parse_jensen_variant(std::string_view text);

/// A channel estimate and the estimator's own account of its error.
struct EstimateWithError {
  CMatrix estimate;
  /// Per-entry error variance (the covariance is this times identity, or
  /// for conditional estimates the average of the diagonal).
  double error_var = 0.0;
  /// N_L x N_L factor M of a Kronecker error covariance M (x) I_{N_t};
  /// present only for the transmitter's downlink estimate given H_u-hat.
  std::optional<CMatrix> conditional_cov;
  /// The uplink estimate the downlink estimate was conditioned on.
  std::optional<CMatrix> conditioned_on;
};

/// Aggregate disturbance variance seen per received entry by an estimator.
struct NoiseStats {
  double effective_noise_var = 0.0;
};

/// Column-wise LMMSE of x in y = pilot * x + n with x ~ CN(0, prior_var I)
/// and white n of variance noise_var.
CMatrix lmmse_columns(const CMatrix& received, const CMatrix& pilot, double prior_var,
                      double noise_var);

/// Transmitter estimate of H from reciprocal reverse training (transpose of
/// the uplink LMMSE).
EstimateWithError tx_estimate_reciprocal(const ReverseTraining& reverse,
                                         const SystemParams& params);

NoiseStats lr_noise_stats_reciprocal(const SystemParams& params, const PowerAllocation& alloc);
EstimateWithError lr_estimate_reciprocal(const ForwardTraining& forward,
                                         const SystemParams& params,
                                         const PowerAllocation& alloc);

/// UR LMMSE of G; the AN is treated as white disturbance of per-entry
/// variance (N_t - N_L) sigma_a^2 sigma_G^2. Valid for both schemes.
NoiseStats ur_noise_stats(const SystemParams& params, double var_a);
EstimateWithError ur_estimate(const ForwardTraining& forward, const SystemParams& params,
                              const PowerAllocation& alloc);

EstimateWithError tx_estimate_uplink(const ReverseTraining& reverse, const SystemParams& params);

/// Transmitter downlink estimate from the echo, conditioned on H_u-hat.
/// Throws Errc::singular_regressor if (H_u H_u^H + beta I) cannot be factored.
EstimateWithError tx_estimate_downlink(const RoundTripTraining& round_trip,
                                       const EstimateWithError& uplink,
                                       const SystemParams& params,
                                       const PowerAllocation& alloc);

NoiseStats lr_noise_stats_nonreciprocal(const SystemParams& params, const PowerAllocation& alloc,
                                        JensenVariant variant);
EstimateWithError lr_estimate_nonreciprocal(const ForwardTraining& forward,
                                            const SystemParams& params,
                                            const PowerAllocation& alloc,
                                            JensenVariant variant = JensenVariant::printed);

}  // namespace dce
