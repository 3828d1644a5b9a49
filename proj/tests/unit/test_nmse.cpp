// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dce/nmse.hpp"

using namespace dce;

// Frozen values come from tests/oracles/direct_substitution.py (40-digit
// arithmetic on the closed forms in the original energy variables).

TEST_CASE("reciprocal NMSE closed forms") {
  const SystemParams p = SystemParams::defaults();
  CHECK(nmse_l_reciprocal(p, 5.0, 0.0, 2.0) == p.var_h);
  CHECK(nmse_l_reciprocal(p, 0.0, 4.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nmse_l_reciprocal(p, 2.0, 4.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(nmse_u_reciprocal(p, 0.0, 1.0) == p.var_g);
  CHECK(nmse_u_reciprocal(p, 4.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(nmse_u_reciprocal(p, 4.0, 1e12) == doctest::Approx(p.var_g).epsilon(1e-9));
}

TEST_CASE("NMSE monotonicity") {
  const SystemParams p = SystemParams::defaults();
  double prev = 2.0;
  for (double ef = 0.0; ef <= 100.0; ef += 5.0) {
    const double v = nmse_l_reciprocal(p, 3.0, ef, 0.5);
    CHECK(v < prev);
    prev = v;
  }
  // More reverse training always helps the LR when AN is present.
  CHECK(nmse_l_reciprocal(p, 10.0, 20.0, 1.0) < nmse_l_reciprocal(p, 1.0, 20.0, 1.0));
  // AN hurts the UR.
  CHECK(nmse_u_reciprocal(p, 20.0, 2.0) > nmse_u_reciprocal(p, 20.0, 1.0));
}

TEST_CASE("non-reciprocal UR NMSE") {
  const SystemParams p = SystemParams::defaults();
  CHECK(nmse_u_nonreciprocal(p, 0.0, 3.0) == p.var_g);
  CHECK(nmse_u_nonreciprocal(p, 4.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nmse_u_nonreciprocal(p, 4.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("non-reciprocal LR approximation") {
  const SystemParams p = SystemParams::defaults();
  for (auto v : {JensenVariant::printed, JensenVariant::sigma_squared}) {
    const auto a = PowerAllocation::non_reciprocal(10.0, 10.0, 10.0, 8.0, 0.0);
    CHECK(nmse_l_nonreciprocal_approx(p, a, v) == doctest::Approx(1.0 / (1.0 + 2.0)).epsilon(1e-15));
    // E_0 = 0: the transmitter knows nothing, the AN attenuation is sigma_Hd^2.
    const auto blind = PowerAllocation::non_reciprocal(0.0, 10.0, 10.0, 8.0, 0.5);
    const double an = p.an_dims() * 0.5 * p.var_hd + p.var_w;
    CHECK(nmse_l_nonreciprocal_approx(p, blind, v) ==
          doctest::Approx(1.0 / (1.0 / p.var_hd + 2.0 / an)).epsilon(1e-15));
  }

  CHECK(downlink_beta(p, 10, 10, 10) == doctest::Approx(1.1333333333333333).epsilon(1e-14));
  const auto tens = PowerAllocation::non_reciprocal(10, 10, 10, 10, 0.5);
  CHECK(nmse_l_nonreciprocal_approx(p, tens, JensenVariant::sigma_squared) ==
        doctest::Approx(0.36979306638000537).epsilon(1e-13));
  CHECK(nmse_l_nonreciprocal_approx(p, tens, JensenVariant::printed) ==
        doctest::Approx(0.36787280281600128).epsilon(1e-13));

  // Equal split of the 20 dB average budget, 100 * 14 / 4 per phase.
  const auto split = PowerAllocation::non_reciprocal(350, 350, 350, 350, 0.5);
  CHECK(nmse_l_nonreciprocal_approx(p, split, JensenVariant::printed) ==
        doctest::Approx(0.011519580619399132).epsilon(1e-12));
  CHECK(nmse_l_nonreciprocal_approx(p, split, JensenVariant::sigma_squared) ==
        doctest::Approx(0.011519846289037571).epsilon(1e-12));
}

TEST_CASE("jensen surrogate limits") {
  const SystemParams p = SystemParams::defaults();
  // No echo: beta is infinite and the surrogate vanishes.
  const auto silent = PowerAllocation::non_reciprocal(10, 0, 10, 10, 0.5);
  CHECK(std::isinf(downlink_beta(p, 10, 0, 10)));
  CHECK(jensen_surrogate(p, silent, JensenVariant::printed) == 0.0);
  // Noiseless transmitter: beta -> 0 and the surrogate -> 1.
  SystemParams q = p;
  q.var_wt = 1e-14;
  const auto a = PowerAllocation::non_reciprocal(10, 10, 10, 10, 0.5);
  CHECK(jensen_surrogate(q, a, JensenVariant::sigma_squared) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gamma tilde, mu and bounds") {
  const SystemParams p = SystemParams::defaults();
  CHECK(gamma_tilde(p, p.var_g) == 0.0);
  CHECK(gamma_tilde(p, 0.1) == doctest::Approx(36.0).epsilon(1e-14));
  // The UR floor is met with equality exactly when E_F = gamma~ and no AN.
  for (double g : {0.02, 0.1, 0.5}) {
    CHECK(nmse_u_reciprocal(p, gamma_tilde(p, g), 0.0) == doctest::Approx(g).epsilon(1e-13));
  }
  CHECK(mu_threshold(p) == 0.0);

  const auto [gmin, gmax] = gamma_bounds(p, Scheme::reciprocal);
  CHECK(gmax == 1.0);
  CHECK(gmin == doctest::Approx(0.0066225165562913907).epsilon(1e-13));
}

TEST_CASE("LR lower bound") {
  CHECK(nmse_lower_bound(SystemParams::defaults(15.0), Scheme::reciprocal) ==
        doctest::Approx(0.020646582882403597).epsilon(1e-12));
  CHECK(nmse_lower_bound(SystemParams::defaults(15.0), Scheme::non_reciprocal) ==
        doctest::Approx(0.0089541773292426546).epsilon(1e-12));
  for (auto scheme : {Scheme::reciprocal, Scheme::non_reciprocal}) {
    double prev = 2.0;
    for (double db = 10.0; db <= 30.0; db += 5.0) {
      const double v = nmse_lower_bound(SystemParams::defaults(db), scheme);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(nmse_lower_bound(SystemParams::defaults(-200.0), scheme) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("energy budgets") {
  const SystemParams p = SystemParams::defaults();
  const EnergyBudgets r = energy_budgets(p, Scheme::reciprocal);
  CHECK(r.average == doctest::Approx(600.0));
  CHECK(r.transmitter == doctest::Approx(4000.0));
  CHECK(r.lr == doctest::Approx(200.0));
  const EnergyBudgets n = energy_budgets(p, Scheme::non_reciprocal);
  CHECK(n.average == doctest::Approx(1400.0));
  CHECK(n.transmitter == doctest::Approx(8000.0));
  CHECK(n.lr == doctest::Approx(600.0));
}
