// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "dce/nmse.hpp"

namespace dce {

/// Reciprocal power allocation: minimize NMSE_L over (E_R, E_F, sigma_a^2)
/// subject to NMSE_U >= gamma and the three energy budgets.
struct ReciprocalProblem {
  SystemParams params;
  double gamma = 0.1;
  EnergyBudgets budgets;

  /// Budgets P_ave(tau_R + tau_F), P̄_t tau_F, P̄_L tau_R.
  static ReciprocalProblem from_params(const SystemParams& params, double gamma);
  /// Budgets held at the minimum-length values P_ave(N_t + N_L), P̄_t N_t,
  /// P̄_L N_L whatever tau_F is (training-length sweeps).
  static ReciprocalProblem with_fixed_energy(const SystemParams& params, double gamma);

  /// Whether max{lr, tx} <= average <= lr + tx, i.e. every budget can bind.
  bool all_budgets_effective() const;
};

enum class ReciprocalBranch {
  closed_form,  // E_R = 0, E_F = gamma~, no AN
  line_search,  // one-dimensional search over E_R
  ur_inactive,  // gamma below gamma_min: the UR floor never binds
};
std::string_view to_string(ReciprocalBranch branch) noexcept;

struct ReciprocalSolution {
  PowerAllocation alloc;
  double objective = 0.0;  // NMSE_L
  double nmse_u = 0.0;
  ReciprocalBranch branch = ReciprocalBranch::closed_form;
  std::vector<std::string> active_constraints;
};

/// Total AN power (N_t - N_L) sigma_a^2 that spends the remaining average
/// budget once E_R is fixed and the UR constraint is active.
double alpha_of_er(const ReciprocalProblem& problem, double e_r);
/// Forward energy that makes the UR constraint active for alpha_of_er(e_r).
double ef_of_er(const ReciprocalProblem& problem, double e_r);
/// The one-variable objective maximized by the line search (larger is better).
double line_search_objective(const ReciprocalProblem& problem, double e_r);

/// Throws Errc::infeasible_gamma when gamma <= 0 or gamma > sigma_G^2.
ReciprocalSolution solve_reciprocal(const ReciprocalProblem& problem);

/// Brute-force verifier: a lattice over (E_R, AN power) with E_F set to its
/// largest feasible value, followed by two zoomed re-gridding passes around
/// the incumbent. Independent of the branch analysis used by the solver.
/// Throws Errc::no_feasible_point when nothing on the lattice is feasible.
ReciprocalSolution grid_oracle_reciprocal(const ReciprocalProblem& problem, int resolution);

/// Names of the constraints active at `alloc` to relative tolerance `tol`.
std::vector<std::string> active_constraints_reciprocal(const ReciprocalProblem& problem,
                                                       const PowerAllocation& alloc,
                                                       double tol = 1e-9);
bool is_feasible_reciprocal(const ReciprocalProblem& problem, const PowerAllocation& alloc,
                            double tol = 1e-9);

}  // namespace dce
