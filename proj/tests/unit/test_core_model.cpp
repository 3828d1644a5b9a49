// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "dce/error.hpp"
#include "dce/model.hpp"

using namespace dce;

TEST_CASE("random streams are deterministic and distinct") {
  RandomStream a(0), b(0), c(1);
  const Complex za = a.complex_gaussian();
  CHECK(za == b.complex_gaussian());
  CHECK(za != c.complex_gaussian());

  RandomStream s1(7, 3), s2(7, 3), s3(7, 4);
  CHECK(s1.next_u64() == s2.next_u64());
  CHECK(s1.next_u64() != s3.next_u64());
}

TEST_CASE("complex gaussian moments") {
  RandomStream rng(42);
  const int n = 100000;
  Complex sum = 0.0;
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex z = rng.complex_gaussian();
    sum += z;
    power += std::norm(z);
  }
  const Complex mean = sum / static_cast<double>(n);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(power / n - std::norm(mean) - 1.0) < 0.02);
}

TEST_CASE("haar unitary is unitary") {
  RandomStream rng(5);
  const CMatrix u = rng.haar_unitary(6);
  CHECK((u.adjoint() * u - CMatrix::Identity(6, 6)).norm() < 1e-12);
}

TEST_CASE("reciprocal channels have the right shapes and h_u = h_d^T") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(1);
  const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
  CHECK(ch.h_d.rows() == 4);
  CHECK(ch.h_d.cols() == 2);
  CHECK(ch.h_u.rows() == 2);
  CHECK(ch.h_u.cols() == 4);
  CHECK(ch.h_u == ch.h_d.transpose());
  CHECK(ch.g.rows() == 4);
  CHECK(ch.g.cols() == 2);
}

TEST_CASE("channel entry power and uplink/downlink independence") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(11);
  const int trials = 10000;
  double power = 0.0;
  Complex cross = 0.0;
  for (int i = 0; i < trials; ++i) {
    const ChannelRealization ch = sample_channels(p, Scheme::non_reciprocal, rng);
    power += std::norm(ch.h_d(0, 0));
    cross += ch.h_d(1, 0) * std::conj(ch.h_u(0, 1));
  }
  CHECK(power / trials >= 0.97);
  CHECK(power / trials <= 1.03);
  CHECK(std::abs(cross / static_cast<double>(trials)) < 0.03);
}

TEST_CASE("null space of the canonical columns") {
  CMatrix h = CMatrix::Zero(4, 2);
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const CMatrix n = null_space_basis(h);
  REQUIRE(n.rows() == 4);
  REQUIRE(n.cols() == 2);
  CHECK((n.adjoint() * h).norm() < 1e-15);
  // Rows 0 and 1 vanish, so the span is {e3, e4}.
  CHECK(n.topRows(2).norm() < 1e-15);
  CHECK((n.adjoint() * n - CMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("null space of random full-rank estimates") {
  RandomStream rng(3);
  for (int k = 0; k < 50; ++k) {
    const CMatrix h = rng.gaussian_matrix(4, 2);
    const CMatrix n = null_space_basis(h);
    CHECK((n.adjoint() * h).norm() <= 1e-10);
    CHECK((n.adjoint() * n - CMatrix::Identity(2, 2)).norm() <= 1e-12);
  }
}

TEST_CASE("null space rejects rank-deficient input") {
  RandomStream rng(4);
  CMatrix h(4, 2);
  h.col(0) = rng.gaussian_matrix(4, 1);
  h.col(1) = h.col(0);
  try {
    null_space_basis(h);
    FAIL("expected rank_deficient");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::rank_deficient);
  }
  CHECK_THROWS_AS(null_space_basis(CMatrix::Zero(4, 2)), Error);
}

TEST_CASE("unitary pilot columns are orthonormal") {
  for (int rows : {2, 4, 6, 16}) {
    const CMatrix c = unitary_pilot(rows, 2);
    CHECK((c.adjoint() * c - CMatrix::Identity(2, 2)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(unitary_pilot(2, 4), std::invalid_argument);
}

TEST_CASE("forward training without AN sends only the pilot") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(8);
  const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
  const ForwardTraining f =
      forward_training(p, Scheme::reciprocal, 4.0, 0.0, ch.h_d, ch, rng);
  CHECK(f.transmit == f.pilot);
  CHECK(f.an_matrix.isZero(0.0));
  CHECK((f.pilot - unitary_pilot(4, 4)).norm() < 1e-15);
  // E_F = 4 over N_t = 4 antennas and 4 slots: unit power per slot.
  for (Eigen::Index r = 0; r < f.pilot.rows(); ++r) {
    CHECK(f.pilot.row(r).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("AN placed with a perfect estimate never reaches the LR") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(9);
  const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
  const ForwardTraining f = forward_training(p, Scheme::reciprocal, 4.0, 3.0, ch.h_d, ch, rng);
  CHECK((f.an_matrix * f.null_basis.adjoint() * ch.h_d).norm() <= 1e-10);
  CHECK(f.an_matrix.norm() > 0.0);
}

TEST_CASE("AN with a zero estimate uses the trailing canonical axes") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(10);
  const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
  const ForwardTraining f =
      forward_training(p, Scheme::reciprocal, 4.0, 1.0, CMatrix::Zero(4, 2), ch, rng);
  CHECK(f.null_basis == CMatrix::Identity(4, 4).rightCols(2));
}

TEST_CASE("reverse training pilot energy and zero-energy noise") {
  const SystemParams p = SystemParams::defaults();
  RandomStream rng(12);
  const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
  const ReverseTraining r = reverse_training(p, 2.0, Scheme::reciprocal, ch, rng);
  CHECK(r.pilot.squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));

  double power = 0.0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const ReverseTraining z = reverse_training(p, 0.0, Scheme::reciprocal, ch, rng);
    CHECK(z.pilot.isZero(0.0));
    power += z.received.squaredNorm() / static_cast<double>(z.received.size());
  }
  CHECK(power / trials == doctest::Approx(p.var_wt).epsilon(0.02));
}

TEST_CASE("noiseless reverse training identifies the channel exactly") {
  SystemParams p = SystemParams::defaults();
  p.var_wt = 1e-30;
  RandomStream rng(13);
  const ChannelRealization ch = sample_channels(p, Scheme::reciprocal, rng);
  const ReverseTraining r = reverse_training(p, 2.0, Scheme::reciprocal, ch, rng);
  const CMatrix ls = (r.pilot.adjoint() * r.pilot).ldlt().solve(r.pilot.adjoint() * r.received);
  CHECK((ls - ch.h_d.transpose()).norm() < 1e-12);
}

TEST_CASE("round trip gain and silent echo") {
  const SystemParams p = SystemParams::defaults();
  CHECK(amplifying_gain(p, 4.0, 4.0) == doctest::Approx(0.5).epsilon(1e-15));

  RandomStream rng(14);
  const ChannelRealization ch = sample_channels(p, Scheme::non_reciprocal, rng);
  const RoundTripTraining rt =
      round_trip_training(p, PowerAllocation::non_reciprocal(4.0, 0.0, 1.0, 1.0, 0.0), ch, rng);
  CHECK(rt.gain == 0.0);
  CHECK(rt.lr_echo.isZero(0.0));
  CHECK(rt.probe.squaredNorm() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("the LR echo carries E_1 on average") {
  const SystemParams p = SystemParams::defaults();
  const auto a = PowerAllocation::non_reciprocal(8.0, 6.0, 1.0, 1.0, 0.0);
  RandomStream rng(15);
  double energy = 0.0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const ChannelRealization ch = sample_channels(p, Scheme::non_reciprocal, rng);
    energy += round_trip_training(p, a, ch, rng).lr_echo.squaredNorm();
  }
  CHECK(energy / trials == doctest::Approx(6.0).epsilon(0.02));
}
