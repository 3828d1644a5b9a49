// SPDX-License-Identifier: Apache-2.0
#include "dce/nmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dce {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// (1/prior + (energy/n_t)/noise)^{-1}, the shape shared by every evaluator.
double lmmse_nmse(double prior, double energy, int n_t, double noise) {
  return 1.0 / (1.0 / prior + (energy / n_t) / noise);
}

}  // namespace

double tx_error_var_reciprocal(const SystemParams& params, double e_r) {
  return 1.0 / (1.0 / params.var_h + e_r / (params.n_l * params.var_wt));
}

double uplink_error_var(const SystemParams& params, double e_2) {
  return 1.0 / (1.0 / params.var_hu + e_2 / (params.n_l * params.var_wt));
}

double uplink_estimate_var(const SystemParams& params, double e_2) {
  const double v = params.var_hu;
  return v * v * e_2 / (v * e_2 + params.n_l * params.var_wt);
}

double downlink_beta(const SystemParams& params, double e_0, double e_1, double e_2) {
  const double alpha_sq = e_1 / (e_0 * params.n_l * params.var_hd +
                                 static_cast<double>(params.tau_0) * params.n_l * params.var_w);
  if (!(alpha_sq > 0.0)) return inf;
  const double t0 = params.var_hd * e_0 / params.n_t + params.var_w;
  return params.n_l * uplink_error_var(params, e_2) + params.var_wt / (alpha_sq * t0);
}

double jensen_surrogate(const SystemParams& params, const PowerAllocation& alloc,
                        JensenVariant variant) {
  const double sigma_sq = uplink_estimate_var(params, alloc.e_2);
  const double s = variant == JensenVariant::printed ? std::sqrt(sigma_sq) : sigma_sq;
  const double beta = downlink_beta(params, alloc.e_0, alloc.e_1, alloc.e_2);
  if (!(s > 0.0) || std::isinf(beta)) return 0.0;
  return params.n_t * s / (beta + params.n_t * s);
}

double nmse_l_reciprocal(const SystemParams& params, double e_r, double e_f, double var_a) {
  const double noise =
      params.an_dims() * tx_error_var_reciprocal(params, e_r) * var_a + params.var_w;
  return lmmse_nmse(params.var_h, e_f, params.n_t, noise);
}

double nmse_u_reciprocal(const SystemParams& params, double e_f, double var_a) {
  const double noise = params.an_dims() * var_a * params.var_g + params.var_v;
  return lmmse_nmse(params.var_g, e_f, params.n_t, noise);
}

double nmse_l_nonreciprocal_approx(const SystemParams& params, const PowerAllocation& alloc,
                                   JensenVariant variant) {
  const double hd = params.var_hd;
  const double rho = hd * alloc.e_0 / (hd * alloc.e_0 + params.n_t * params.var_w);
  const double j = jensen_surrogate(params, alloc, variant);
  const double noise = params.an_dims() * alloc.var_a * (hd - hd * rho * j) + params.var_w;
  return lmmse_nmse(hd, alloc.e_3, params.n_t, noise);
}

double nmse_u_nonreciprocal(const SystemParams& params, double e_3, double var_a) {
  return nmse_u_reciprocal(params, e_3, var_a);
}

double gamma_tilde(const SystemParams& params, double gamma) {
  return (1.0 / gamma - 1.0 / params.var_g) * params.n_t * params.var_v;
}

double mu_threshold(const SystemParams& params) {
  return params.n_l * (params.var_v * params.var_wt / (params.var_g * params.var_w) -
                       params.var_wt / params.var_h);
}

DerivedConstants derived_constants(const SystemParams& params, const PowerAllocation& alloc,
                                   double gamma) {
  DerivedConstants c;
  c.gamma_tilde = gamma_tilde(params, gamma);
  c.mu = mu_threshold(params);
  c.sigma_sq = uplink_estimate_var(params, alloc.e_2);
  c.beta = downlink_beta(params, alloc.e_0, alloc.e_1, alloc.e_2);
  return c;
}

EnergyBudgets energy_budgets(const SystemParams& params, Scheme scheme) {
  EnergyBudgets b;
  if (scheme == Scheme::reciprocal) {
    b.average = params.p_ave * (params.tau_r + params.tau_f);
    b.transmitter = params.p_bar_t * params.tau_f;
    b.lr = params.p_bar_l * params.tau_r;
  } else {
    // Phases: probe (tau_0), echo (tau_0), uplink pilot (tau_2), forward (tau_3).
    b.average = params.p_ave * (2 * params.tau_0 + params.tau_2 + params.tau_3);
    b.transmitter = params.p_bar_t * (params.tau_0 + params.tau_3);
    b.lr = params.p_bar_l * (params.tau_0 + params.tau_2);
  }
  return b;
}

std::pair<double, double> gamma_bounds(const SystemParams& params, const EnergyBudgets& budgets) {
  const double e = std::min(budgets.transmitter, budgets.average);
  const double gamma_min = lmmse_nmse(params.var_g, e, params.n_t, params.var_v);
  return {gamma_min, params.var_g};
}

std::pair<double, double> gamma_bounds(const SystemParams& params, Scheme scheme) {
  return gamma_bounds(params, energy_budgets(params, scheme));
}

double nmse_lower_bound(const SystemParams& params, Scheme scheme) {
  const double nt = params.n_t;
  const double nl = params.n_l;
  if (scheme == Scheme::reciprocal) {
    const double e = std::min(params.p_bar_t * nt, params.p_ave * (nl + nt));
    return lmmse_nmse(params.var_h, e, params.n_t, params.var_w);
  }
  const double e = std::min(2.0 * params.p_bar_t * nt, params.p_ave * (3.0 * nt + nl));
  return lmmse_nmse(params.var_hd, e, params.n_t, params.var_w);
}

}  // namespace dce
