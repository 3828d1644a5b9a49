// SPDX-License-Identifier: Apache-2.0
#include "dce/alloc_reciprocal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dce/error.hpp"

namespace dce {

namespace {

constexpr int scan_points = 512;

void check_gamma(const SystemParams& params, double gamma) {
  if (!(gamma > 0.0) || gamma > params.var_g) {
    throw Error(Errc::infeasible_gamma, "gamma " + std::to_string(gamma) +
                                            " outside (0, sigma_G^2 = " +
                                            std::to_string(params.var_g) + "]");
  }
}

// With more average budget than both individual budgets together, the
// average constraint is redundant; cap it so the active-constraint algebra holds.
double effective_average(const EnergyBudgets& b) {
  return std::min(b.average, b.lr + b.transmitter);
}

ReciprocalSolution finish(const ReciprocalProblem& problem, PowerAllocation alloc,
                          ReciprocalBranch branch) {
  ReciprocalSolution s;
  s.alloc = alloc;
  s.branch = branch;
  s.objective = nmse_l_reciprocal(problem.params, alloc.e_r, alloc.e_f, alloc.var_a);
  s.nmse_u = nmse_u_reciprocal(problem.params, alloc.e_f, alloc.var_a);
  s.active_constraints = active_constraints_reciprocal(problem, alloc);
  return s;
}

PowerAllocation allocation_at(const ReciprocalProblem& problem, double e_r) {
  const double alpha = std::max(0.0, alpha_of_er(problem, e_r));
  return PowerAllocation::reciprocal(e_r, ef_of_er(problem, e_r),
                                     alpha / problem.params.an_dims());
}

// Golden-section maximization of f on [a, b] down to `width`.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double width) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  width = std::max(width, 1e-14 * std::max(std::abs(a), std::abs(b)));
  for (int it = 0; it < 500 && b - a > width; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = fc >= fd ? c : d;
  return {x, std::max(fc, fd)};
}

}  // namespace

ReciprocalProblem ReciprocalProblem::from_params(const SystemParams& params, double gamma) {
  return {params, gamma, energy_budgets(params, Scheme::reciprocal)};
}

ReciprocalProblem ReciprocalProblem::with_fixed_energy(const SystemParams& params, double gamma) {
  EnergyBudgets b;
  b.average = params.p_ave * (params.n_t + params.n_l);
  b.transmitter = params.p_bar_t * params.n_t;
  b.lr = params.p_bar_l * params.n_l;
  return {params, gamma, b};
}

bool ReciprocalProblem::all_budgets_effective() const {
  return std::max(budgets.lr, budgets.transmitter) <= budgets.average &&
         budgets.average <= budgets.lr + budgets.transmitter;
}

std::string_view to_string(ReciprocalBranch branch) noexcept {
  switch (branch) {
    case ReciprocalBranch::closed_form: return "closed-form";
    case ReciprocalBranch::line_search: return "line-search";
    case ReciprocalBranch::ur_inactive: return "ur-inactive";
  }
  return "unknown";
}

double alpha_of_er(const ReciprocalProblem& problem, double e_r) {
  const SystemParams& p = problem.params;
  const double gt = gamma_tilde(p, problem.gamma);
  return (effective_average(problem.budgets) - gt - e_r) / (p.tau_f + p.var_g * gt / p.var_v);
}

double ef_of_er(const ReciprocalProblem& problem, double e_r) {
  const SystemParams& p = problem.params;
  const double gt = gamma_tilde(p, problem.gamma);
  return gt * (p.var_g / p.var_v * std::max(0.0, alpha_of_er(problem, e_r)) + 1.0);
}

double line_search_objective(const ReciprocalProblem& problem, double e_r) {
  const SystemParams& p = problem.params;
  const double a = p.n_l * p.var_wt + p.var_h * e_r;
  const double alpha = std::max(0.0, alpha_of_er(problem, e_r));
  const double e_f = ef_of_er(problem, e_r);
  return a * e_f / (a + p.n_l * p.var_h * (p.var_wt / p.var_w) * alpha);
}

ReciprocalSolution solve_reciprocal(const ReciprocalProblem& problem) {
  const SystemParams& p = problem.params;
  const EnergyBudgets& b = problem.budgets;
  check_gamma(p, problem.gamma);

  const double gamma_min = gamma_bounds(p, b).first;
  if (problem.gamma < gamma_min) {
    return finish(problem,
                  PowerAllocation::reciprocal(0.0, std::min(b.transmitter, b.average), 0.0),
                  ReciprocalBranch::ur_inactive);
  }

  const double gt = gamma_tilde(p, problem.gamma);
  const double avg = effective_average(b);
  const double upper = std::min(b.lr, avg - gt);
  const double lower = std::min(upper, std::max({0.0, mu_threshold(p), avg - b.transmitter}));
  if (mu_threshold(p) > upper || gt <= 0.0) {
    return finish(problem, PowerAllocation::reciprocal(0.0, gt, 0.0),
                  ReciprocalBranch::closed_form);
  }

  auto f = [&](double e_r) { return line_search_objective(problem, e_r); };
  const double span = upper - lower;
  double best_x = lower;
  double best_f = f(lower);
  if (span > 0.0) {
    int best_i = 0;
    for (int i = 1; i < scan_points; ++i) {
      const double x = lower + span * i / (scan_points - 1);
      const double fx = f(x);
      if (fx > best_f) {
        best_f = fx;
        best_x = x;
        best_i = i;
      }
    }
    const double a = lower + span * std::max(0, best_i - 1) / (scan_points - 1);
    const double c = lower + span * std::min(scan_points - 1, best_i + 1) / (scan_points - 1);
    const auto [gx, gf] = golden_max(f, a, c, 1e-9 * span);
    if (gf > best_f) {
      best_x = gx;
      best_f = gf;
    }
  }
  return finish(problem, allocation_at(problem, best_x), ReciprocalBranch::line_search);
}

ReciprocalSolution grid_oracle_reciprocal(const ReciprocalProblem& problem, int resolution) {
  if (resolution < 50) throw std::invalid_argument("grid_oracle_reciprocal: resolution < 50");
  const SystemParams& p = problem.params;
  const EnergyBudgets& b = problem.budgets;
  check_gamma(p, problem.gamma);
  const double gt = gamma_tilde(p, problem.gamma);

  double er_lo = 0.0;
  double er_hi = std::min(b.lr, b.average);
  double an_lo = 0.0;
  double an_hi = std::min(b.transmitter, b.average) / p.tau_f;
  const double er_max = er_hi;
  const double an_max = an_hi;

  bool found = false;
  double best = 0.0;
  double best_er = 0.0;
  double best_an = 0.0;
  double best_ef = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    const double der = (er_hi - er_lo) / resolution;
    const double dan = (an_hi - an_lo) / resolution;
    for (int i = 0; i <= resolution; ++i) {
      const double e_r = er_lo + der * i;
      for (int j = 0; j <= resolution; ++j) {
        const double an = an_lo + dan * j;
        const double e_f = std::min({gt * (p.var_g / p.var_v * an + 1.0),
                                     b.average - e_r - an * p.tau_f,
                                     b.transmitter - an * p.tau_f});
        if (e_f < 0.0) continue;
        const double value = nmse_l_reciprocal(p, e_r, e_f, an / p.an_dims());
        if (!found || value < best) {
          found = true;
          best = value;
          best_er = e_r;
          best_an = an;
          best_ef = e_f;
        }
      }
    }
    if (!found) {
      throw Error(Errc::no_feasible_point, "grid_oracle_reciprocal: empty feasible lattice");
    }
    er_lo = std::max(0.0, best_er - 2.0 * der);
    er_hi = std::min(er_max, best_er + 2.0 * der);
    an_lo = std::max(0.0, best_an - 2.0 * dan);
    an_hi = std::min(an_max, best_an + 2.0 * dan);
  }
  return finish(problem, PowerAllocation::reciprocal(best_er, best_ef, best_an / p.an_dims()),
                ReciprocalBranch::line_search);
}

std::vector<std::string> active_constraints_reciprocal(const ReciprocalProblem& problem,
                                                       const PowerAllocation& alloc,
                                                       double tol) {
  const SystemParams& p = problem.params;
  const EnergyBudgets& b = problem.budgets;
  const double an_energy = p.an_dims() * alloc.var_a * p.tau_f;
  auto near = [tol](double value, double target) {
    return std::abs(value - target) <= tol * std::abs(target);
  };
  std::vector<std::string> active;
  if (near(nmse_u_reciprocal(p, alloc.e_f, alloc.var_a), problem.gamma)) active.push_back("nmse_u");
  if (near(alloc.e_r + alloc.e_f + an_energy, b.average)) active.push_back("average");
  if (near(alloc.e_f + an_energy, b.transmitter)) active.push_back("transmitter");
  if (near(alloc.e_r, b.lr)) active.push_back("lr");
  return active;
}

bool is_feasible_reciprocal(const ReciprocalProblem& problem, const PowerAllocation& alloc,
                            double tol) {
  const SystemParams& p = problem.params;
  const EnergyBudgets& b = problem.budgets;
  if (!alloc.non_negative()) return false;
  const double an_energy = p.an_dims() * alloc.var_a * p.tau_f;
  return nmse_u_reciprocal(p, alloc.e_f, alloc.var_a) >= problem.gamma * (1.0 - tol) &&
         alloc.e_r + alloc.e_f + an_energy <= b.average * (1.0 + tol) &&
         alloc.e_f + an_energy <= b.transmitter * (1.0 + tol) &&
         alloc.e_r <= b.lr * (1.0 + tol);
}

}  // namespace dce
