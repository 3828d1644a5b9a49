// SPDX-License-Identifier: Apache-2.0
#include "dce/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dce/error.hpp"

namespace dce {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::rank_deficient: return "rank_deficient";
    case Errc::singular_regressor: return "singular_regressor";
    case Errc::infeasible_gamma: return "infeasible_gamma";
    case Errc::no_feasible_point: return "no_feasible_point";
    case Errc::infeasible: return "infeasible";
    case Errc::not_converged: return "not_converged";
    case Errc::stalled: return "stalled";
    case Errc::unsupported_geometry: return "unsupported_geometry";
    case Errc::config: return "config";
    case Errc::verification_failed: return "verification_failed";
  }
  return "unknown";
}

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::reciprocal ? "reciprocal" : "non-reciprocal";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "reciprocal" || text == "rec") return Scheme::reciprocal;
  if (text == "non-reciprocal" || text == "nonreciprocal" || text == "nonrec")
    return Scheme::non_reciprocal;
  throw Error(Errc::config, "unknown scheme '" + std::string(text) + "'");
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) noexcept {
  if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(linear);
}

void SystemParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(n_t >= 2, "n_t must be at least 2");
  require(n_l >= 1, "n_l must be at least 1");
  require(n_u >= 1, "n_u must be at least 1");
  require(n_t > n_l, "n_t must exceed n_l so the AN null space is nonempty");
  for (double v : {var_h, var_hd, var_hu, var_g, var_w, var_wt, var_v}) {
    require(std::isfinite(v) && v > 0.0, "variances must be finite and positive");
  }
  for (double p : {p_ave, p_bar_t, p_bar_l}) {
    require(std::isfinite(p) && p > 0.0, "power limits must be finite and positive");
  }
  require(tau_r >= n_l, "tau_r must be at least n_l");
  require(tau_f >= n_t, "tau_f must be at least n_t");
  require(tau_0 >= n_t, "tau_0 must be at least n_t");
  require(tau_2 >= n_l, "tau_2 must be at least n_l");
  require(tau_3 >= n_t, "tau_3 must be at least n_t");
}

SystemParams SystemParams::defaults(double p_ave_db) {
  SystemParams p;
  p.p_ave = db_to_linear(p_ave_db);
  return p;
}

PowerAllocation PowerAllocation::reciprocal(double e_r, double e_f, double var_a) {
  PowerAllocation a;
  a.scheme = Scheme::reciprocal;
  a.e_r = e_r;
  a.e_f = e_f;
  a.var_a = var_a;
  return a;
}

PowerAllocation PowerAllocation::non_reciprocal(double e_0, double e_1, double e_2, double e_3,
                                                double var_a) {
  PowerAllocation a;
  a.scheme = Scheme::non_reciprocal;
  a.e_0 = e_0;
  a.e_1 = e_1;
  a.e_2 = e_2;
  a.e_3 = e_3;
  a.var_a = var_a;
  return a;
}

bool PowerAllocation::non_negative() const noexcept {
  for (double v : {e_r, e_f, e_0, e_1, e_2, e_3, var_a}) {
    if (!(v >= 0.0)) return false;
  }
  return true;
}

}  // namespace dce
