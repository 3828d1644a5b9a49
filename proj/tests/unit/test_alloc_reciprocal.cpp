// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "dce/alloc_reciprocal.hpp"
#include "dce/error.hpp"

using namespace dce;

namespace {

bool has(const std::vector<std::string>& names, const std::string& n) {
  return std::find(names.begin(), names.end(), n) != names.end();
}

}  // namespace

TEST_CASE("AN power and forward energy along the active UR constraint") {
  const auto problem = ReciprocalProblem::from_params(SystemParams::defaults(20.0), 0.1);
  CHECK(gamma_tilde(problem.params, 0.1) == doctest::Approx(36.0));
  CHECK(alpha_of_er(problem, 50.0) == doctest::Approx(12.85).epsilon(1e-14));
  CHECK(ef_of_er(problem, 50.0) == doctest::Approx(498.6).epsilon(1e-14));
  CHECK(alpha_of_er(problem, 600.0 - 36.0) == doctest::Approx(0.0).scale(1.0));

  // Along the curve the UR constraint holds with equality.
  for (double er : {0.0, 10.0, 50.0, 150.0}) {
    const double alpha = alpha_of_er(problem, er);
    CHECK(nmse_u_reciprocal(problem.params, ef_of_er(problem, er), alpha / 2.0) ==
          doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("unit variances always take the line-search branch") {
  const SystemParams p = SystemParams::defaults(20.0);
  CHECK(mu_threshold(p) == 0.0);
  const ReciprocalSolution s = solve_reciprocal(ReciprocalProblem::from_params(p, 0.1));
  CHECK(s.branch == ReciprocalBranch::line_search);
  CHECK(s.nmse_u == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(has(s.active_constraints, "nmse_u"));
}

TEST_CASE("solver matches the grid oracle") {
  for (auto [db, gamma] : {std::pair{20.0, 0.1}, std::pair{15.0, 0.03}, std::pair{25.0, 0.03}}) {
    const auto problem = ReciprocalProblem::from_params(SystemParams::defaults(db), gamma);
    const ReciprocalSolution s = solve_reciprocal(problem);
    const ReciprocalSolution g = grid_oracle_reciprocal(problem, 200);
    CHECK(s.objective <= g.objective * (1.0 + 1e-3));
    CHECK(is_feasible_reciprocal(problem, s.alloc));
    CHECK(is_feasible_reciprocal(problem, g.alloc));
  }
}

TEST_CASE("large mu selects the closed form") {
  // mu = N_L (sigma_v^2 sigma_w~^2 / (sigma_G^2 sigma_w^2) - sigma_w~^2 / sigma_H^2) grows with
  // the UR noise; gamma must exceed gamma_min = 1/(1 + 600/4000).
  SystemParams p = SystemParams::defaults(20.0);
  p.var_v = 1000.0;
  const auto problem = ReciprocalProblem::from_params(p, 0.9);
  REQUIRE(mu_threshold(p) > std::min(problem.budgets.lr, 600.0 - gamma_tilde(p, 0.9)));
  const ReciprocalSolution s = solve_reciprocal(problem);
  CHECK(s.branch == ReciprocalBranch::closed_form);
  CHECK(s.alloc.e_r == 0.0);
  CHECK(s.alloc.var_a == 0.0);
  CHECK(s.alloc.e_f == doctest::Approx(gamma_tilde(p, 0.9)).epsilon(1e-15));
  const ReciprocalSolution g = grid_oracle_reciprocal(problem, 200);
  CHECK(s.objective <= g.objective * (1.0 + 1e-3));
}

TEST_CASE("gamma at the prior variance") {
  const auto problem = ReciprocalProblem::from_params(SystemParams::defaults(20.0), 1.0);
  const ReciprocalSolution s = solve_reciprocal(problem);
  // gamma~ = 0 allows no forward training at all.
  CHECK(s.alloc.e_f == 0.0);
  CHECK(s.objective == doctest::Approx(1.0));
  const ReciprocalSolution g = grid_oracle_reciprocal(problem, 50);
  CHECK(g.objective == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("low power with a tight floor leaves reverse training and AN idle") {
  const auto problem = ReciprocalProblem::from_params(SystemParams::defaults(10.0), 0.03);
  const ReciprocalSolution s = solve_reciprocal(problem);
  CHECK(s.alloc.e_r == 0.0);
  CHECK(s.alloc.var_a == 0.0);
}

TEST_CASE("AN power grows with gamma") {
  for (double db : {15.0, 20.0, 25.0, 30.0}) {
    const SystemParams p = SystemParams::defaults(db);
    const double hi = solve_reciprocal(ReciprocalProblem::from_params(p, 0.1)).alloc.var_a;
    const double lo = solve_reciprocal(ReciprocalProblem::from_params(p, 0.03)).alloc.var_a;
    CHECK(hi > lo);
  }
}

TEST_CASE("invalid gamma") {
  const SystemParams p = SystemParams::defaults(20.0);
  for (double g : {0.0, -0.1, 1.5}) {
    try {
      solve_reciprocal(ReciprocalProblem::from_params(p, g));
      FAIL("expected infeasible_gamma");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::infeasible_gamma);
    }
  }
}

TEST_CASE("line-search objective is maximized") {
  const auto problem = ReciprocalProblem::from_params(SystemParams::defaults(20.0), 0.1);
  const ReciprocalSolution s = solve_reciprocal(problem);
  const double best = line_search_objective(problem, s.alloc.e_r);
  for (double er = 0.0; er <= problem.budgets.lr; er += 1.0) {
    CHECK(line_search_objective(problem, er) <= best * (1.0 + 1e-12));
  }
}
