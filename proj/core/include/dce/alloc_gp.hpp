// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "dce/gp.hpp"
#include "dce/nmse.hpp"

namespace dce {

/// Non-reciprocal power allocation: minimize the approximate NMSE_L over
/// (E_0, E_1, E_2, E_3, sigma_a^2) subject to NMSE_U >= gamma and the
/// average / transmitter / LR energy budgets.
///
/// Requires the minimum-length pilots tau_0 = tau_3 = N_t and tau_2 = N_L,
/// which the change of variables below relies on.
struct NonReciprocalProblem {
  SystemParams params;
  double gamma = 0.1;
  EnergyBudgets budgets;

  static NonReciprocalProblem from_params(const SystemParams& params, double gamma);
};

/// Log-space variables of the geometric program:
///   t0 = sigma_Hd^2 E_0 / N_t + sigma_w^2     t1 = alpha^2
///   t2 = E_2 / N_L                            t3 = E_3 / N_t
///   t4 = (N_t - N_L) sigma_a^2 sigma_G^2 + sigma_v^2
/// and t, the auxiliary ratio that drives the objective
///   NMSE_L = (1/sigma_Hd^2 + t / sigma_w^2)^{-1}.
/// E_1 = N_t N_L t0 t1 follows from the amplifying gain.
struct GpState {
  double t = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;

  std::array<double, 6> as_array() const { return {t, t0, t1, t2, t3, t4}; }
  static GpState from_array(std::span<const double> x);
};

/// Constants of the four linear constraints written as posynomials <= 1.
struct GpConstants {
  double c1 = 0.0;  // UR floor
  double c2 = 0.0;  // average budget
  double c3 = 0.0;  // transmitter budget
  double c4 = 0.0;  // LR budget
};
GpConstants gp_constants(const NonReciprocalProblem& problem);

/// t is set to its largest admissible value f1/f2.
GpState to_gp_variables(const SystemParams& params, const PowerAllocation& alloc);
PowerAllocation from_gp_variables(const SystemParams& params, const GpState& state);

/// f1/f2 evaluated on the state's (t0..t4); the exact value of t.
double gp_ratio_bound(const SystemParams& params, const GpState& state);
/// t * f2 / f1; the ratio constraint reads value <= 1 and is active at 1.
double ratio_constraint_value(const SystemParams& params, const GpState& state);

/// Posynomial numerator and denominator of the ratio constraint, in the
/// variable order (t, t0, t1, t2, t3, t4).
gp::Posynomial ratio_numerator(const SystemParams& params);
gp::Posynomial ratio_denominator(const SystemParams& params);

/// Exponents of the monomial approximation of the ratio denominator at an
/// expansion point. theta_t is the exponent of t; theta[0..3] those of t0..t3.
struct ThetaExponents {
  double theta_t = 0.0;
  std::array<double, 4> theta{};
  double g_value = 0.0;  // denominator value at the expansion point
};
ThetaExponents theta_exponents(const SystemParams& params, const GpState& expansion);

/// The condensed standard-form GP at an expansion point.
gp::Problem condensed_problem(const NonReciprocalProblem& problem, const GpState& expansion);

struct CondensationStep {
  GpState expansion;
  ThetaExponents theta;
  GpState optimum;
  double objective = 0.0;  // t at the inner optimum
  double kkt_residual = 0.0;
};

struct CondensationTrace {
  std::vector<CondensationStep> steps;
  bool converged = false;
};

struct CondensationOptions {
  double tol = 1e-6;
  int max_iter = 50;
  gp::Options inner{};
};

struct CondensationResult {
  PowerAllocation alloc;
  GpState state;
  CondensationTrace trace;
};

/// Monomial-approximation / condensation loop. `start` must be strictly
/// feasible. Throws Errc::stalled if the objective ever decreases and
/// propagates Errc::infeasible from the inner solver.
CondensationResult condense(const NonReciprocalProblem& problem, const GpState& start,
                            const CondensationOptions& options = {});

/// Deterministic interior starting point: the average budget split equally
/// over E_0..E_3, the smallest AN meeting the UR floor, then uniform
/// shrinking until every constraint holds strictly.
GpState initial_feasible_point(const NonReciprocalProblem& problem);

enum class NonReciprocalBranch { condensation, ur_inactive };
std::string_view to_string(NonReciprocalBranch branch) noexcept;

struct NonReciprocalSolution {
  PowerAllocation alloc;
  double objective = 0.0;  // NMSE_L under the sigma-squared surrogate
  double nmse_u = 0.0;
  NonReciprocalBranch branch = NonReciprocalBranch::condensation;
  int iterations = 0;
  CondensationTrace trace;
};

/// Full solve: gamma checks, starting point and condensation. Below gamma_min
/// the UR floor cannot bind and the whole budget goes to forward training.
/// Throws Errc::infeasible_gamma when gamma <= 0 or gamma > sigma_G^2.
NonReciprocalSolution solve_nonreciprocal(const NonReciprocalProblem& problem,
                                          const CondensationOptions& options = {});

/// Brute-force verifier over a nested geometric lattice in (E_0, E_1, E_2,
/// sigma_a^2), with E_2 scaled to the LR budget left by E_1;
/// E_3 takes its largest feasible value since the objective decreases in it.
/// Throws Errc::no_feasible_point when nothing on the lattice is feasible.
struct GridResult {
  PowerAllocation alloc;
  double objective = 0.0;
};
GridResult grid_oracle_nonreciprocal(const NonReciprocalProblem& problem, int resolution,
                                     JensenVariant variant = JensenVariant::sigma_squared);

bool is_feasible_nonreciprocal(const NonReciprocalProblem& problem, const PowerAllocation& alloc,
                               double tol = 1e-9);

}  // namespace dce
