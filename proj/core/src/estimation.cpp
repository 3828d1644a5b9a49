// SPDX-License-Identifier: Apache-2.0
#include "dce/estimation.hpp"

#include <cmath>
#include <string>

#include "dce/error.hpp"
#include "dce/nmse.hpp"

namespace dce {

std::string_view to_string(JensenVariant variant) noexcept {
  return variant == JensenVariant::printed ? "printed" : "sigma-squared";
}

JensenVariant parse_jensen_variant(std::string_view text) {
  if (text == "printed") return JensenVariant::printed;
  if (text == "sigma-squared" || text == "sigma_squared" || text == "sigma2")
    return JensenVariant::sigma_squared;
  throw Error(Errc::config, "unknown jensen variant '" + std::string(text) + "'");
}

CMatrix lmmse_columns(const CMatrix& received, const CMatrix& pilot, double prior_var,
                      double noise_var) {
  CMatrix gram = pilot.adjoint() * pilot;
  gram.diagonal().array() += noise_var / prior_var;
  Eigen::LDLT<CMatrix> ldlt(gram);
  return ldlt.solve(pilot.adjoint() * received);
}

EstimateWithError tx_estimate_reciprocal(const ReverseTraining& reverse,
                                         const SystemParams& params) {
  EstimateWithError out;
  out.estimate =
      lmmse_columns(reverse.received, reverse.pilot, params.var_h, params.var_wt).transpose();
  out.error_var = tx_error_var_reciprocal(params, reverse.energy);
  return out;
}

NoiseStats lr_noise_stats_reciprocal(const SystemParams& params, const PowerAllocation& alloc) {
  return {params.an_dims() * tx_error_var_reciprocal(params, alloc.e_r) * alloc.var_a +
          params.var_w};
}

EstimateWithError lr_estimate_reciprocal(const ForwardTraining& forward,
                                         const SystemParams& params,
                                         const PowerAllocation& alloc) {
  const NoiseStats noise = lr_noise_stats_reciprocal(params, alloc);
  EstimateWithError out;
  out.estimate =
      lmmse_columns(forward.received_lr, forward.pilot, params.var_h, noise.effective_noise_var);
  out.error_var = nmse_l_reciprocal(params, alloc.e_r, alloc.e_f, alloc.var_a);
  return out;
}

NoiseStats ur_noise_stats(const SystemParams& params, double var_a) {
  return {params.an_dims() * var_a * params.var_g + params.var_v};
}

EstimateWithError ur_estimate(const ForwardTraining& forward, const SystemParams& params,
                              const PowerAllocation& alloc) {
  const NoiseStats noise = ur_noise_stats(params, alloc.var_a);
  EstimateWithError out;
  out.estimate =
      lmmse_columns(forward.received_ur, forward.pilot, params.var_g, noise.effective_noise_var);
  out.error_var = nmse_u_reciprocal(params, alloc.forward_energy(), alloc.var_a);
  return out;
}

EstimateWithError tx_estimate_uplink(const ReverseTraining& reverse, const SystemParams& params) {
  EstimateWithError out;
  out.estimate = lmmse_columns(reverse.received, reverse.pilot, params.var_hu, params.var_wt);
  out.error_var = uplink_error_var(params, reverse.energy);
  return out;
}

EstimateWithError tx_estimate_downlink(const RoundTripTraining& round_trip,
                                       const EstimateWithError& uplink,
                                       const SystemParams& params,
                                       const PowerAllocation& alloc) {
  const double hd = params.var_hd;
  const CMatrix& hu = uplink.estimate;
  EstimateWithError out;
  out.conditioned_on = hu;
  const double beta = downlink_beta(params, alloc.e_0, alloc.e_1, alloc.e_2);
  if (!(alloc.e_0 > 0.0) || !(round_trip.gain > 0.0) || std::isinf(beta)) {
    out.estimate = CMatrix::Zero(params.n_t, params.n_l);
    out.conditional_cov = CMatrix(hd * CMatrix::Identity(params.n_l, params.n_l));
    out.error_var = hd;
    return out;
  }
  const double t0 = hd * alloc.e_0 / params.n_t + params.var_w;
  const double rho = hd * alloc.e_0 / (hd * alloc.e_0 + params.n_t * params.var_w);

  // (Hu^H Hu + beta I)^{-1} Hu^H = Hu^H (Hu Hu^H + beta I)^{-1}; the N_L x N_L
  // form stays well conditioned as beta -> 0.
  CMatrix regressor = hu * hu.adjoint();
  regressor.diagonal().array() += beta;
  Eigen::LDLT<CMatrix> ldlt(regressor);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > 1e-14)) {
    throw Error(Errc::singular_regressor, "tx_estimate_downlink: regressor not invertible");
  }
  const CMatrix z = round_trip.probe.adjoint() * round_trip.received;
  const CMatrix right = ldlt.solve(CMatrix::Identity(params.n_l, params.n_l));
  out.estimate = (hd / (round_trip.gain * t0)) * z * hu.adjoint() * right;

  const Eigen::Index nl = params.n_l;
  const CMatrix k = hu.conjugate() * hu.transpose();
  CMatrix shifted = k;
  shifted.diagonal().array() += beta;
  // K and (K + beta I)^{-1} commute, so the product order is immaterial.
  const CMatrix gain = shifted.ldlt().solve(k);
  CMatrix m = hd * CMatrix::Identity(nl, nl) - (hd * rho) * gain;
  out.error_var = m.trace().real() / static_cast<double>(nl);
  out.conditional_cov = std::move(m);
  return out;
}

NoiseStats lr_noise_stats_nonreciprocal(const SystemParams& params, const PowerAllocation& alloc,
                                        JensenVariant variant) {
  const double hd = params.var_hd;
  const double rho = hd * alloc.e_0 / (hd * alloc.e_0 + params.n_t * params.var_w);
  const double j = jensen_surrogate(params, alloc, variant);
  return {params.an_dims() * alloc.var_a * (hd - hd * rho * j) + params.var_w};
}

EstimateWithError lr_estimate_nonreciprocal(const ForwardTraining& forward,
                                            const SystemParams& params,
                                            const PowerAllocation& alloc,
                                            JensenVariant variant) {
  const NoiseStats noise = lr_noise_stats_nonreciprocal(params, alloc, variant);
  EstimateWithError out;
  out.estimate =
      lmmse_columns(forward.received_lr, forward.pilot, params.var_hd, noise.effective_noise_var);
  out.error_var = nmse_l_nonreciprocal_approx(params, alloc, variant);
  return out;
}

}  // namespace dce
