// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dce/error.hpp"
#include "dce/estimation.hpp"
#include "dce/nmse.hpp"

using namespace dce;

namespace {

// Mean per-entry squared error of the LR and UR estimates over `trials`
// reciprocal runs, independent of the Monte-Carlo driver.
std::pair<double, double> reciprocal_errors(const SystemParams& p, const PowerAllocation& a,
                                            int trials, std::uint64_t seed) {
  RandomStream rng(seed);
  double lr = 0.0, ur = 0.0;
  for (int i = 0; i < trials; ++i) {
    const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
    const ReverseTraining rev = reverse_training(p, a.e_r, Scheme::reciprocal, ch, rng);
    const EstimateWithError tx = tx_estimate_reciprocal(rev, p);
    const ForwardTraining fwd =
        forward_training(p, Scheme::reciprocal, a.e_f, a.var_a, tx.estimate, ch, rng);
    lr += (lr_estimate_reciprocal(fwd, p, a).estimate - ch.h_d).squaredNorm() / (p.n_t * p.n_l);
    ur += (ur_estimate(fwd, p, a).estimate - ch.g).squaredNorm() / (p.n_t * p.n_u);
  }
  return {lr / trials, ur / trials};
}

}  // namespace

TEST_CASE("reciprocal transmitter estimate") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(1);
  const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);

  const EstimateWithError none = tx_estimate_reciprocal(
      reverse_training(p, 0.0, Scheme::reciprocal, ch, rng), p);
  CHECK(none.estimate.isZero(0.0));
  CHECK(none.error_var == p.var_h);

  const EstimateWithError two =
      tx_estimate_reciprocal(reverse_training(p, 2.0, Scheme::reciprocal, ch, rng), p);
  CHECK(two.error_var == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.estimate.rows() == 4);
  CHECK(two.estimate.cols() == 2);
}

TEST_CASE("reciprocal transmitter error variance matches simulation") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(2);
  double err = 0.0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
    const EstimateWithError e =
        tx_estimate_reciprocal(reverse_training(p, 2.0, Scheme::reciprocal, ch, rng), p);
    err += (e.estimate - ch.h_d).squaredNorm() / 8.0;
  }
  CHECK(err / trials == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("LR effective noise") {
  const SystemParams p = SystemParams::defaults();
  CHECK(lr_noise_stats_reciprocal(p, PowerAllocation::reciprocal(2, 4, 1)).effective_noise_var ==
        doctest::Approx(2.0).epsilon(1e-15));
  // Perfect transmitter knowledge nulls the AN: the per-entry noise falls to
  // sigma_w^2, i.e. N_L sigma_w^2 per row of the stacked model.
  const double limit =
      lr_noise_stats_reciprocal(p, PowerAllocation::reciprocal(1e15, 4, 1)).effective_noise_var;
  CHECK(limit == doctest::Approx(p.var_w).epsilon(1e-12));
  CHECK(p.n_l * limit == doctest::Approx(p.n_l * p.var_w).epsilon(1e-12));
}

TEST_CASE("reciprocal LR and UR without AN reach 0.5") {
  const SystemParams p = SystemParams::defaults();
  const auto a = PowerAllocation::reciprocal(2.0, 4.0, 0.0);
  CHECK(nmse_l_reciprocal(p, a.e_r, a.e_f, a.var_a) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nmse_u_reciprocal(p, a.e_f, a.var_a) == doctest::Approx(0.5).epsilon(1e-15));
  const auto [lr, ur] = reciprocal_errors(p, a, 10000, 3);
  CHECK(lr == doctest::Approx(0.5).epsilon(0.02));
  CHECK(ur == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("reciprocal LR and UR with AN match the closed forms") {
  const SystemParams p = SystemParams::defaults();
  const auto a = PowerAllocation::reciprocal(2.0, 4.0, 1.0);
  const auto [lr, ur] = reciprocal_errors(p, a, 10000, 4);
  CHECK(lr == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(ur == doctest::Approx(0.75).epsilon(0.02));
  CHECK(ur_noise_stats(p, 1.0).effective_noise_var == doctest::Approx(3.0));
}

TEST_CASE("uplink estimate") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(5);
  const ChannelRealization ch = sample_channels(p, Scheme::non_reciprocal, rng);
  const EstimateWithError none =
      tx_estimate_uplink(reverse_training(p, 0.0, Scheme::non_reciprocal, ch, rng), p);
  CHECK(none.estimate.isZero(0.0));
  CHECK(none.error_var == p.var_hu);
  const EstimateWithError two =
      tx_estimate_uplink(reverse_training(p, 2.0, Scheme::non_reciprocal, ch, rng), p);
  CHECK(two.error_var == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.estimate.rows() == 2);
  CHECK(two.estimate.cols() == 4);
}

TEST_CASE("downlink estimate is consistent in the noiseless limit") {
  SystemParams p = SystemParams::defaults();
  p.var_w = 1e-14;
  p.var_wt = 1e-14;
  const auto a = PowerAllocation::non_reciprocal(40.0, 40.0, 1e6, 4.0, 0.0);
  RandomStream rng(6);
  for (int k = 0; k < 20; ++k) {
    const ChannelRealization ch = sample_channels(p, Scheme::non_reciprocal, rng);
    const RoundTripTraining rt = round_trip_training(p, a, ch, rng);
    const EstimateWithError up =
        tx_estimate_uplink(reverse_training(p, a.e_2, Scheme::non_reciprocal, ch, rng), p);
    const EstimateWithError down = tx_estimate_downlink(rt, up, p, a);
    CHECK((down.estimate - ch.h_d).norm() / ch.h_d.norm() < 1e-5);
  }
}

TEST_CASE("downlink estimate without an echo falls back to the prior") {
  const SystemParams p = SystemParams::defaults();
  const auto a = PowerAllocation::non_reciprocal(10.0, 0.0, 10.0, 4.0, 0.0);
  RandomStream rng(7);
  const ChannelRealization ch = sample_channels(p, Scheme::non_reciprocal, rng);
  const RoundTripTraining rt = round_trip_training(p, a, ch, rng);
  const EstimateWithError up =
      tx_estimate_uplink(reverse_training(p, a.e_2, Scheme::non_reciprocal, ch, rng), p);
  const EstimateWithError down = tx_estimate_downlink(rt, up, p, a);
  CHECK(down.estimate.isZero(0.0));
  CHECK(down.error_var == p.var_hd);
}

TEST_CASE("downlink conditional covariance matches simulation") {
  // The conditional covariance averaged over H_u-hat is the transmitter's
  // expected per-entry error.
  const SystemParams p = SystemParams::defaults();
  const auto a = PowerAllocation::non_reciprocal(10.0, 10.0, 10.0, 4.0, 0.0);
  RandomStream rng(8);
  double predicted = 0.0, measured = 0.0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const ChannelRealization ch = sample_channels(p, Scheme::non_reciprocal, rng);
    const RoundTripTraining rt = round_trip_training(p, a, ch, rng);
    const EstimateWithError up =
        tx_estimate_uplink(reverse_training(p, a.e_2, Scheme::non_reciprocal, ch, rng), p);
    const EstimateWithError down = tx_estimate_downlink(rt, up, p, a);
    predicted += down.error_var;
    measured += (down.estimate - ch.h_d).squaredNorm() / 8.0;
  }
  CHECK(measured / trials == doctest::Approx(predicted / trials).epsilon(0.03));
}

TEST_CASE("non-reciprocal LR estimate without AN") {
  const SystemParams p = SystemParams::defaults();
  const auto a = PowerAllocation::non_reciprocal(10.0, 10.0, 10.0, 4.0, 0.0);
  for (auto v : {JensenVariant::printed, JensenVariant::sigma_squared}) {
    CHECK(lr_noise_stats_nonreciprocal(p, a, v).effective_noise_var == p.var_w);
  }
  // Perfect transmitter CSI removes the AN term as well.
  const auto perfect = PowerAllocation::non_reciprocal(1e14, 1e14, 1e14, 4.0, 1.0);
  CHECK(lr_noise_stats_nonreciprocal(p, perfect, JensenVariant::printed).effective_noise_var ==
        doctest::Approx(p.var_w).epsilon(1e-6));
}

TEST_CASE("jensen variant names") {
  CHECK(parse_jensen_variant("printed") == JensenVariant::printed);
  CHECK(parse_jensen_variant("sigma-squared") == JensenVariant::sigma_squared);
  CHECK(to_string(JensenVariant::sigma_squared) == "sigma-squared");
  CHECK_THROWS_AS(parse_jensen_variant("sigma"), Error);
}

TEST_CASE("lmmse columns reduce to least squares with a vague prior") {
  RandomStream rng(9);
  const CMatrix pilot = rng.gaussian_matrix(6, 3);
  const CMatrix x = rng.gaussian_matrix(3, 2);
  const CMatrix y = pilot * x;
  CHECK((lmmse_columns(y, pilot, 1e12, 1.0) - x).norm() < 1e-9);
}
