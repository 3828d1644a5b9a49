// SPDX-License-Identifier: Apache-2.0
#include "dce/alloc_gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dce/error.hpp"

namespace dce {

namespace {

constexpr std::size_t num_vars = 6;  // t, t0, t1, t2, t3, t4

gp::Monomial mono(double coef, std::array<double, num_vars> e) {
  return gp::Monomial{coef, std::vector<double>(e.begin(), e.end())};
}

// Terms of P and Q over (t0, t1, t2); each entry is {coefficient, e0, e1, e2}.
struct Term {
  double coef;
  double e0, e1, e2;
};

std::array<Term, 4> p_terms(const SystemParams& p) {
  const double k = p.n_t * p.var_hu / p.var_wt;
  return {{{static_cast<double>(p.n_l), 1, 1, 0},
           {k, 1, 1, 1},
           {1.0, 0, 0, 1},
           {p.var_wt / p.var_hu, 0, 0, 0}}};
}

std::array<Term, 4> q_terms(const SystemParams& p) {
  const double k = p.n_t * p.var_hu / p.var_wt;
  return {{{p.n_l / p.var_w, 1, 1, 0},
           {k, 0, 1, 1},
           {1.0 / p.var_w, 0, 0, 1},
           {p.var_wt / (p.var_hu * p.var_w), 0, 0, 0}}};
}

double term_value(const Term& term, const GpState& s) {
  return term.coef * std::pow(s.t0, term.e0) * std::pow(s.t1, term.e1) * std::pow(s.t2, term.e2);
}

double sum_terms(const std::array<Term, 4>& terms, const GpState& s) {
  double v = 0.0;
  for (const auto& term : terms) v += term_value(term, s);
  return v;
}

// Adds scale * t^et * t3^e3 * t4^e4 * (each term) to `out`.
void add_scaled(gp::Posynomial& out, const std::array<Term, 4>& terms, double scale, double et,
                double e3, double e4) {
  for (const auto& term : terms) {
    out.add(mono(scale * term.coef, {et, term.e0, term.e1, term.e2, e3, e4}));
  }
}

void check_gamma(const SystemParams& params, double gamma) {
  if (!(gamma > 0.0) || gamma > params.var_g) {
    throw Error(Errc::infeasible_gamma, "gamma " + std::to_string(gamma) +
                                            " outside (0, sigma_G^2 = " +
                                            std::to_string(params.var_g) + "]");
  }
}

double budget_offset(const SystemParams& p) {
  return p.n_t * p.var_w / p.var_hd + p.n_t * p.var_v / p.var_g;
}

bool strictly_inside(const NonReciprocalProblem& problem, const GpState& s) {
  const SystemParams& p = problem.params;
  const GpConstants c = gp_constants(problem);
  const double nt = p.n_t;
  const double nl = p.n_l;
  const double e01 = nt * nl * s.t0 * s.t1;
  const double tx_part = nt / p.var_hd * s.t0 + nt * s.t3 + nt / p.var_g * s.t4;
  return p.var_w / s.t0 < 1.0 && p.var_v / s.t4 < 1.0 && c.c1 * s.t3 / s.t4 < 1.0 &&
         c.c2 * (tx_part + e01 + nl * s.t2) < 1.0 && c.c3 * tx_part < 1.0 &&
         c.c4 * (e01 + nl * s.t2) < 1.0 && ratio_constraint_value(p, s) < 1.0;
}

}  // namespace

NonReciprocalProblem NonReciprocalProblem::from_params(const SystemParams& params, double gamma) {
  if (params.tau_0 != params.n_t || params.tau_3 != params.n_t || params.tau_2 != params.n_l) {
    throw Error(Errc::unsupported_geometry,
                "non-reciprocal allocation needs tau_0 = tau_3 = n_t and tau_2 = n_l");
  }
  return {params, gamma, energy_budgets(params, Scheme::non_reciprocal)};
}

GpState GpState::from_array(std::span<const double> x) {
  return {x[0], x[1], x[2], x[3], x[4], x[5]};
}

GpConstants gp_constants(const NonReciprocalProblem& problem) {
  const SystemParams& p = problem.params;
  GpConstants c;
  c.c1 = 1.0 / (1.0 / problem.gamma - 1.0 / p.var_g);
  c.c2 = 1.0 / (problem.budgets.average + budget_offset(p));
  c.c3 = 1.0 / (problem.budgets.transmitter + budget_offset(p));
  c.c4 = 1.0 / problem.budgets.lr;
  return c;
}

GpState to_gp_variables(const SystemParams& params, const PowerAllocation& alloc) {
  GpState s;
  s.t0 = params.var_hd * alloc.e_0 / params.n_t + params.var_w;
  const double g = amplifying_gain(params, alloc.e_0, alloc.e_1);
  s.t1 = g * g;
  s.t2 = alloc.e_2 / params.n_l;
  s.t3 = alloc.e_3 / params.n_t;
  s.t4 = params.an_dims() * alloc.var_a * params.var_g + params.var_v;
  s.t = gp_ratio_bound(params, s);
  return s;
}

PowerAllocation from_gp_variables(const SystemParams& params, const GpState& s) {
  const double e_0 = std::max(0.0, params.n_t * (s.t0 - params.var_w) / params.var_hd);
  const double e_1 = s.t1 * (e_0 * params.n_l * params.var_hd +
                             static_cast<double>(params.tau_0) * params.n_l * params.var_w);
  const double var_a =
      std::max(0.0, (s.t4 - params.var_v) / (params.an_dims() * params.var_g));
  return PowerAllocation::non_reciprocal(e_0, e_1, params.n_l * s.t2, params.n_t * s.t3, var_a);
}

double gp_ratio_bound(const SystemParams& params, const GpState& s) {
  const double pv = sum_terms(p_terms(params), s);
  const double qv = sum_terms(q_terms(params), s);
  const double f1 = s.t3 * pv;
  const double f2 = (s.t4 - params.var_v) / params.var_g * params.var_hd * qv + pv;
  return f1 / f2;
}

double ratio_constraint_value(const SystemParams& params, const GpState& s) {
  return s.t / gp_ratio_bound(params, s);
}

gp::Posynomial ratio_numerator(const SystemParams& params) {
  gp::Posynomial n;
  add_scaled(n, q_terms(params), params.var_hd / params.var_g, 1, 0, 1);
  add_scaled(n, p_terms(params), 1.0, 1, 0, 0);
  return n;
}

gp::Posynomial ratio_denominator(const SystemParams& params) {
  gp::Posynomial d;
  add_scaled(d, q_terms(params), params.var_v * params.var_hd / params.var_g, 1, 0, 0);
  add_scaled(d, p_terms(params), 1.0, 0, 1, 0);
  return d;
}

ThetaExponents theta_exponents(const SystemParams& params, const GpState& x) {
  const double k = params.var_v * params.var_hd / params.var_g;
  const auto q = q_terms(params);
  const auto p = p_terms(params);
  std::array<double, 8> m{};
  for (std::size_t i = 0; i < 4; ++i) {
    m[i] = x.t * k * term_value(q[i], x);
    m[i + 4] = x.t3 * term_value(p[i], x);
  }
  double g = 0.0;
  for (double v : m) g += v;
  ThetaExponents th;
  th.g_value = g;
  th.theta_t = (m[0] + m[1] + m[2] + m[3]) / g;
  th.theta[0] = (m[0] + m[4] + m[5]) / g;
  th.theta[1] = (m[0] + m[1] + m[4] + m[5]) / g;
  th.theta[2] = (m[1] + m[2] + m[5] + m[6]) / g;
  th.theta[3] = (m[4] + m[5] + m[6] + m[7]) / g;
  return th;
}

namespace {

gp::Problem build_condensed(const NonReciprocalProblem& problem, const GpState& x,
                            const ThetaExponents& th) {
  const SystemParams& p = problem.params;
  const GpConstants c = gp_constants(problem);
  const double nt = p.n_t;
  const double nl = p.n_l;

  gp::Problem gpp;
  gpp.num_vars = static_cast<int>(num_vars);
  gpp.objective.add(mono(1.0, {-1, 0, 0, 0, 0, 0}));

  gpp.constraints.emplace_back(std::vector{mono(p.var_w, {0, -1, 0, 0, 0, 0})});
  gpp.constraints.emplace_back(std::vector{mono(p.var_v, {0, 0, 0, 0, 0, -1})});
  gpp.constraints.emplace_back(std::vector{mono(c.c1, {0, 0, 0, 0, 1, -1})});
  gpp.constraints.emplace_back(std::vector{
      mono(c.c2 * nt / p.var_hd, {0, 1, 0, 0, 0, 0}), mono(c.c2 * nt * nl, {0, 1, 1, 0, 0, 0}),
      mono(c.c2 * nl, {0, 0, 0, 1, 0, 0}), mono(c.c2 * nt, {0, 0, 0, 0, 1, 0}),
      mono(c.c2 * nt / p.var_g, {0, 0, 0, 0, 0, 1})});
  gpp.constraints.emplace_back(std::vector{mono(c.c3 * nt / p.var_hd, {0, 1, 0, 0, 0, 0}),
                                           mono(c.c3 * nt, {0, 0, 0, 0, 1, 0}),
                                           mono(c.c3 * nt / p.var_g, {0, 0, 0, 0, 0, 1})});
  gpp.constraints.emplace_back(std::vector{mono(c.c4 * nt * nl, {0, 1, 1, 0, 0, 0}),
                                           mono(c.c4 * nl, {0, 0, 0, 1, 0, 0})});

  // g(x) ~ g(xbar) prod (x_i / xbar_i)^theta_i
  const std::array<double, 5> base{x.t, x.t0, x.t1, x.t2, x.t3};
  const std::array<double, 5> ex{th.theta_t, th.theta[0], th.theta[1], th.theta[2], th.theta[3]};
  double log_coef = std::log(th.g_value);
  for (std::size_t i = 0; i < 5; ++i) log_coef -= ex[i] * std::log(base[i]);
  const gp::Monomial g_hat = mono(std::exp(log_coef), {ex[0], ex[1], ex[2], ex[3], ex[4], 0});
  gpp.constraints.push_back(ratio_numerator(p).divided_by(g_hat));
  return gpp;
}

}  // namespace

gp::Problem condensed_problem(const NonReciprocalProblem& problem, const GpState& expansion) {
  return build_condensed(problem, expansion, theta_exponents(problem.params, expansion));
}

CondensationResult condense(const NonReciprocalProblem& problem, const GpState& start,
                            const CondensationOptions& options) {
  const SystemParams& p = problem.params;
  CondensationResult out;
  GpState expansion = start;
  double previous = start.t;
  for (int k = 0; k < options.max_iter; ++k) {
    CondensationStep step;
    step.expansion = expansion;
    step.theta = theta_exponents(p, expansion);
    const gp::Problem gpp = build_condensed(problem, expansion, step.theta);
    const auto x0 = expansion.as_array();
    const gp::Result r = gp::solve(gpp, x0, options.inner);
    step.optimum = GpState::from_array(r.x);
    step.objective = step.optimum.t;
    step.kkt_residual = r.kkt_residual;
    out.trace.steps.push_back(step);
    if (step.objective < previous * (1.0 - 1e-9)) {
      throw Error(Errc::stalled, "condense: objective decreased from " + std::to_string(previous) +
                                     " to " + std::to_string(step.objective));
    }
    const double change = std::abs(step.objective - previous) / previous;
    expansion = step.optimum;
    previous = std::max(previous, step.objective);
    if (change < options.tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.state = expansion;
  out.alloc = from_gp_variables(p, expansion);
  return out;
}

GpState initial_feasible_point(const NonReciprocalProblem& problem) {
  const SystemParams& p = problem.params;
  const GpConstants c = gp_constants(problem);
  double energy = problem.budgets.average / 4.0;
  for (int attempt = 0; attempt < 2000; ++attempt, energy *= 0.9) {
    GpState s = to_gp_variables(p, PowerAllocation::non_reciprocal(energy, energy, energy, energy, 0.0));
    s.t4 = std::max(p.var_v, c.c1 * s.t3) * 1.01;
    s.t = 0.5 * gp_ratio_bound(p, s);
    if (strictly_inside(problem, s)) return s;
  }
  throw Error(Errc::infeasible, "initial_feasible_point: no strictly feasible start found");
}

std::string_view to_string(NonReciprocalBranch branch) noexcept {
  return branch == NonReciprocalBranch::condensation ? "condensation" : "ur-inactive";
}

NonReciprocalSolution solve_nonreciprocal(const NonReciprocalProblem& problem,
                                          const CondensationOptions& options) {
  const SystemParams& p = problem.params;
  check_gamma(p, problem.gamma);
  const EnergyBudgets& b = problem.budgets;
  NonReciprocalSolution sol;
  auto finish = [&](PowerAllocation alloc) {
    sol.alloc = alloc;
    sol.objective = nmse_l_nonreciprocal_approx(p, alloc, JensenVariant::sigma_squared);
    sol.nmse_u = nmse_u_nonreciprocal(p, alloc.e_3, alloc.var_a);
    sol.iterations = static_cast<int>(sol.trace.steps.size());
    return sol;
  };

  if (problem.gamma < gamma_bounds(p, b).first) {
    sol.branch = NonReciprocalBranch::ur_inactive;
    return finish(PowerAllocation::non_reciprocal(0, 0, 0, std::min(b.transmitter, b.average), 0));
  }
  if (problem.gamma == p.var_g) {
    // NMSE_U can only equal the prior with no forward training at all.
    return finish(PowerAllocation::non_reciprocal(0, 0, 0, 0, 0));
  }
  CondensationResult r = condense(problem, initial_feasible_point(problem), options);
  sol.trace = std::move(r.trace);
  return finish(r.alloc);
}

namespace {

// Zero followed by resolution geometric points ending at top. Lattices at
// resolution n are subsets of those at 2n.
std::vector<double> geometric_axis(double top, int resolution) {
  constexpr double span = 300.0;
  std::vector<double> axis{0.0};
  for (int m = resolution - 1; m >= 0; --m) {
    axis.push_back(top * std::pow(span, -static_cast<double>(m) / resolution));
  }
  return axis;
}

}  // namespace

GridResult grid_oracle_nonreciprocal(const NonReciprocalProblem& problem, int resolution,
                                     JensenVariant variant) {
  if (resolution < 20) throw std::invalid_argument("grid_oracle_nonreciprocal: resolution < 20");
  const SystemParams& p = problem.params;
  check_gamma(p, problem.gamma);
  const EnergyBudgets& b = problem.budgets;
  const double ur_slope = p.n_t * (1.0 / problem.gamma - 1.0 / p.var_g);
  const double e12_max = std::min(b.lr, b.average);
  const std::vector<double> tx_axis = geometric_axis(std::min(b.transmitter, b.average), resolution);
  const std::vector<double> lr_axis = geometric_axis(e12_max, resolution);
  const std::vector<double> share_axis = geometric_axis(1.0, resolution);

  bool found = false;
  GridResult best;
  for (const double an_energy : tx_axis) {
    const double var_a = an_energy / (p.an_dims() * p.tau_3);
    const double t4 = p.an_dims() * var_a * p.var_g + p.var_v;
    for (const double e_0 : tx_axis) {
      const double tx_left = b.transmitter - e_0 - an_energy;
      if (tx_left < 0.0) break;
      for (const double e_1 : lr_axis) {
        // E_2 is a share of the LR budget E_1 leaves.
        for (const double share : share_axis) {
          const double e_2 = (e12_max - e_1) * share;
          const double e_3 = std::min({ur_slope * t4, b.average - e_0 - e_1 - e_2 - an_energy,
                                       tx_left});
          if (e_3 < 0.0) break;
          const auto alloc = PowerAllocation::non_reciprocal(e_0, e_1, e_2, e_3, var_a);
          const double value = nmse_l_nonreciprocal_approx(p, alloc, variant);
          if (!found || value < best.objective) {
            found = true;
            best.alloc = alloc;
            best.objective = value;
          }
        }
      }
    }
  }
  if (!found) throw Error(Errc::no_feasible_point, "grid_oracle_nonreciprocal: empty lattice");
  return best;
}

bool is_feasible_nonreciprocal(const NonReciprocalProblem& problem, const PowerAllocation& a,
                               double tol) {
  const SystemParams& p = problem.params;
  const EnergyBudgets& b = problem.budgets;
  if (!a.non_negative()) return false;
  const double an_energy = p.an_dims() * a.var_a * p.tau_3;
  return nmse_u_nonreciprocal(p, a.e_3, a.var_a) >= problem.gamma * (1.0 - tol) &&
         a.e_0 + a.e_1 + a.e_2 + a.e_3 + an_energy <= b.average * (1.0 + tol) &&
         a.e_0 + a.e_3 + an_energy <= b.transmitter * (1.0 + tol) &&
         a.e_1 + a.e_2 <= b.lr * (1.0 + tol);
}

}  // namespace dce
