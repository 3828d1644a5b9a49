// SPDX-License-Identifier: Apache-2.0
#include "dce/model.hpp"

#include <cmath>
#include <numbers>

#include "dce/error.hpp"

namespace dce {

ChannelRealization sample_channels(const SystemParams& params, Scheme scheme, RandomStream& rng) {
  ChannelRealization ch;
  if (scheme == Scheme::reciprocal) {
    ch.h_d = rng.gaussian_matrix(params.n_t, params.n_l, params.var_h);
    ch.h_u = ch.h_d.transpose();
  } else {
    ch.h_d = rng.gaussian_matrix(params.n_t, params.n_l, params.var_hd);
    ch.h_u = rng.gaussian_matrix(params.n_l, params.n_t, params.var_hu);
  }
  ch.g = rng.gaussian_matrix(params.n_t, params.n_u, params.var_g);
  return ch;
}

CMatrix unitary_pilot(Eigen::Index rows, Eigen::Index cols) {
  if (rows < cols) throw std::invalid_argument("unitary_pilot: rows < cols");
  CMatrix c(rows, cols);
  const double norm = 1.0 / std::sqrt(static_cast<double>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((i * j) % rows) /
                           static_cast<double>(rows);
      c(i, j) = std::polar(norm, phase);
    }
  }
  return c;
}

CMatrix null_space_basis(const CMatrix& h_hat) {
  const Eigen::Index n = h_hat.rows();
  const Eigen::Index k = h_hat.cols();
  Eigen::JacobiSVD<CMatrix> svd(h_hat, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-10 * smax) ++rank;
  }
  if (smax <= 0.0 || rank < k) {
    throw Error(Errc::rank_deficient, "null_space_basis: estimate has numerical rank " +
                                          std::to_string(rank) + " < " + std::to_string(k));
  }
  return svd.matrixU().rightCols(n - k);
}

ReverseTraining reverse_training(const SystemParams& params, double energy, Scheme scheme,
                                 const ChannelRealization& channels, RandomStream& rng) {
  const int tau = scheme == Scheme::reciprocal ? params.tau_r : params.tau_2;
  ReverseTraining out;
  out.energy = energy;
  out.pilot = std::sqrt(energy / params.n_l) * unitary_pilot(tau, params.n_l);
  out.received = out.pilot * channels.h_u + rng.gaussian_matrix(tau, params.n_t, params.var_wt);
  return out;
}

double amplifying_gain(const SystemParams& params, double e_0, double e_1) {
  const double denom = e_0 * params.n_l * params.var_hd +
                       static_cast<double>(params.tau_0) * params.n_l * params.var_w;
  return std::sqrt(e_1 / denom);
}

RoundTripTraining round_trip_training(const SystemParams& params, const PowerAllocation& alloc,
                                      const ChannelRealization& channels, RandomStream& rng) {
  RoundTripTraining out;
  const CMatrix c = rng.haar_unitary(params.tau_0).leftCols(params.n_t);
  out.probe = std::sqrt(alloc.e_0 / params.n_t) * c;
  out.gain = amplifying_gain(params, alloc.e_0, alloc.e_1);
  const CMatrix y_l0 =
      out.probe * channels.h_d + rng.gaussian_matrix(params.tau_0, params.n_l, params.var_w);
  out.lr_echo = out.gain * y_l0;
  out.received =
      out.lr_echo * channels.h_u + rng.gaussian_matrix(params.tau_0, params.n_t, params.var_wt);
  return out;
}

ForwardTraining forward_training(const SystemParams& params, Scheme scheme, double energy,
                                 double var_a, const CMatrix& h_d_hat,
                                 const ChannelRealization& channels, RandomStream& rng) {
  const int tau = scheme == Scheme::reciprocal ? params.tau_f : params.tau_3;
  const int dims = params.an_dims();
  ForwardTraining out;
  out.pilot = std::sqrt(energy / params.n_t) * unitary_pilot(tau, params.n_t);
  if (var_a > 0.0) {
    if (h_d_hat.isZero(0.0)) {
      out.null_basis = CMatrix::Identity(params.n_t, params.n_t).rightCols(dims);
    } else {
      out.null_basis = null_space_basis(h_d_hat);
    }
    out.an_matrix = rng.gaussian_matrix(tau, dims, var_a);
    out.transmit = out.pilot + out.an_matrix * out.null_basis.adjoint();
  } else {
    out.an_matrix = CMatrix::Zero(tau, dims);
    out.transmit = out.pilot;
  }
  out.received_lr =
      out.transmit * channels.h_d + rng.gaussian_matrix(tau, params.n_l, params.var_w);
  out.received_ur =
      out.transmit * channels.g + rng.gaussian_matrix(tau, params.n_u, params.var_v);
  return out;
}

}  // namespace dce
