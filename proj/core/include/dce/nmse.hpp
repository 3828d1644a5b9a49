// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "dce/estimation.hpp"
#include "dce/params.hpp"

namespace dce {

// Closed-form NMSE evaluators and the constants shared by both allocators.
// All functions are pure.

/// Per-entry transmitter error variance after reciprocal reverse training.
double tx_error_var_reciprocal(const SystemParams& params, double e_r);
/// Per-entry transmitter error variance of the uplink estimate.
double uplink_error_var(const SystemParams& params, double e_2);
/// Variance of each entry of H_u-hat.
double uplink_estimate_var(const SystemParams& params, double e_2);
/// beta of the downlink estimator; +infinity when the echo carries no signal.
double downlink_beta(const SystemParams& params, double e_0, double e_1, double e_2);
/// Surrogate for E{1/(beta/lambda + 1)}: N_t s / (beta + N_t s) with s = sigma
/// (printed) or sigma^2.
double jensen_surrogate(const SystemParams& params, const PowerAllocation& alloc,
                        JensenVariant variant);

double nmse_l_reciprocal(const SystemParams& params, double e_r, double e_f, double var_a);
double nmse_u_reciprocal(const SystemParams& params, double e_f, double var_a);
double nmse_l_nonreciprocal_approx(const SystemParams& params, const PowerAllocation& alloc,
                                   JensenVariant variant = JensenVariant::printed);
double nmse_u_nonreciprocal(const SystemParams& params, double e_3, double var_a);

/// (1/gamma - 1/sigma_G^2) N_t sigma_v^2.
double gamma_tilde(const SystemParams& params, double gamma);
/// Threshold deciding whether reverse training and AN are worth any power.
double mu_threshold(const SystemParams& params);

struct DerivedConstants {
  double gamma_tilde = 0.0;
  double mu = 0.0;
  double sigma_sq = 0.0;
  double beta = 0.0;
};
DerivedConstants derived_constants(const SystemParams& params, const PowerAllocation& alloc,
                                   double gamma);

/// Energy budgets of the power-allocation problems: average (sum over all
/// phases), transmitter-only and LR-only.
struct EnergyBudgets {
  double average = 0.0;
  double transmitter = 0.0;
  double lr = 0.0;
};
/// Budgets from the configured powers and training lengths.
EnergyBudgets energy_budgets(const SystemParams& params, Scheme scheme);

/// Admissible range [gamma_min, gamma_max] of the UR NMSE floor.
std::pair<double, double> gamma_bounds(const SystemParams& params, Scheme scheme);
std::pair<double, double> gamma_bounds(const SystemParams& params, const EnergyBudgets& budgets);

/// NMSE the LR could reach with no AN and the whole budget on forward training.
double nmse_lower_bound(const SystemParams& params, Scheme scheme);

}  // namespace dce
