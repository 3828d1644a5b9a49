// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "dce/params.hpp"
#include "dce/rng.hpp"

namespace dce {

/// One Monte-Carlo draw of every channel matrix.
struct ChannelRealization {
  CMatrix h_d;  // N_t x N_L, transmitter to LR
  CMatrix h_u;  // N_L x N_t, LR to transmitter (h_d^T when reciprocal)
  CMatrix g;    // N_t x N_U, transmitter to UR
};

ChannelRealization sample_channels(const SystemParams& params, Scheme scheme, RandomStream& rng);

/// Deterministic semi-unitary pilot: the first `cols` columns of the
/// normalized `rows`-point DFT, so C^H C = I_cols. Requires rows >= cols.
CMatrix unitary_pilot(Eigen::Index rows, Eigen::Index cols);

/// Orthonormal basis of the left null space of `h_hat` (N^H h_hat = 0).
/// Throws Errc::rank_deficient when the numerical rank of `h_hat` is below
/// its column count; the rank tolerance is 1e-10 times the largest singular value.
CMatrix null_space_basis(const CMatrix& h_hat);

/// Reverse training X_L = sqrt(E/N_L) C_L sent by the LR, received at the
/// transmitter through h_u.
struct ReverseTraining {
  CMatrix pilot;     // X_L, tau x N_L
  CMatrix received;  // Y_t, tau x N_t
  double energy = 0.0;
};

ReverseTraining reverse_training(const SystemParams& params, double energy, Scheme scheme,
                                 const ChannelRealization& channels, RandomStream& rng);

/// Round-trip phase of the non-reciprocal protocol. The transmitter keeps
/// `probe` private; only the echo and its own received signal are observable.
struct RoundTripTraining {
  CMatrix probe;     // X_t0 = sqrt(E_0/N_t) C_t0 with a Haar-random unitary C_t0
  CMatrix lr_echo;   // alpha * Y_L0, what the LR transmits back
  CMatrix received;  // Y_t1 at the transmitter
  double gain = 0.0; // alpha
};

/// Amplify-and-forward gain of the LR echo.
double amplifying_gain(const SystemParams& params, double e_0, double e_1);

RoundTripTraining round_trip_training(const SystemParams& params, const PowerAllocation& alloc,
                                      const ChannelRealization& channels, RandomStream& rng);

/// Forward training with artificial noise placed in the estimated null space.
struct ForwardTraining {
  CMatrix pilot;       // sqrt(E/N_t) C_t, tau x N_t
  CMatrix an_matrix;   // A, tau x (N_t - N_L); zero columns when var_a == 0
  CMatrix null_basis;  // N, N_t x (N_t - N_L); empty when var_a == 0
  CMatrix transmit;    // X_t = pilot + A N^H
  CMatrix received_lr; // Y_L
  CMatrix received_ur; // Y_U
};

/// `h_d_hat` is the transmitter's downlink estimate. An exactly zero
/// estimate (no reverse training) carries no direction information and the
/// AN is placed on the trailing canonical axes; any other rank-deficient
/// estimate propagates Errc::rank_deficient.
ForwardTraining forward_training(const SystemParams& params, Scheme scheme, double energy,
                                 double var_a,
                                 const CMatrix& h_d_hat, const ChannelRealization& channels,
                                 RandomStream& rng);

}  // namespace dce
