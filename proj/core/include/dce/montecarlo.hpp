// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dce/alloc_gp.hpp"
#include "dce/alloc_reciprocal.hpp"
#include "dce/estimation.hpp"

namespace dce {

/// Runs trial(i) for i in [0, trials) on up to `workers` threads and returns
/// the results in index order. workers == 0 picks the hardware concurrency.
template <typename T>
std::vector<T> run_trials(std::size_t trials, unsigned workers,
                          const std::function<T(std::size_t)>& trial);

/// Order-fixed pairwise sum; identical for any partitioning of the work.
double pairwise_sum(std::span<const double> values);

struct MeanWithCi {
  double mean = 0.0;
  double half_width_95 = 0.0;
};
MeanWithCi mean_with_ci(std::span<const double> samples);

/// Everything one trial of the full training protocol produces.
struct TrialOutcome {
  ChannelRealization channels;
  CMatrix lr_estimate;
  CMatrix ur_estimate;
  int resampled = 0;
};

/// One complete training run: channels, every phase, every estimator. A
/// rank-deficient transmitter estimate redraws the trial's random inputs.
TrialOutcome simulate_training(const SystemParams& params, const PowerAllocation& alloc,
                               RandomStream& rng, JensenVariant variant = JensenVariant::printed);

struct NmseReport {
  double analytic_lr = 0.0;
  double analytic_ur = 0.0;
  double empirical_lr = 0.0;
  double empirical_ur = 0.0;
  double half_width_lr = 0.0;
  double half_width_ur = 0.0;
  std::size_t trials = 0;
  int resampled_trials = 0;
};

struct ExperimentOptions {
  unsigned workers = 0;
  JensenVariant variant = JensenVariant::printed;
};

/// Throws std::invalid_argument when trials < 100.
NmseReport run_nmse_experiment(const SystemParams& params, const PowerAllocation& alloc,
                               std::size_t trials, std::uint64_t seed,
                               const ExperimentOptions& options = {});

struct AllocRow {
  double p_ave_db = 0.0;
  double gamma = 0.0;
  PowerAllocation alloc;
  double nmse_l = 0.0;
  double nmse_u = 0.0;
  std::string branch;
  int iterations = 0;
  bool in_range = true;  // gamma within [gamma_min, gamma_max]
};

/// Solves the allocation problem at every (P_ave, gamma) pair, P_ave-major.
std::vector<AllocRow> sweep_power_allocation(const SystemParams& params, Scheme scheme,
                                             std::span<const double> gammas,
                                             std::span<const double> paves_db);

struct SerReport {
  double ser_lr = 0.0;
  double ser_ur = 0.0;
  double half_width_lr = 0.0;  // 95% half-widths of the per-trial error fraction
  double half_width_ur = 0.0;
  std::size_t trials = 0;
  std::size_t symbols = 0;
  int qam_order = 64;
  std::string code = "ostbc-4x4-rate3/4";
};

/// Data phase after training: one rate-3/4 OSTBC block of unit-energy QAM
/// symbols per trial at total power P_ave per slot; each receiver decodes
/// with its own channel estimate as if it were exact.
/// Throws Errc::unsupported_geometry unless N_t == 4.
SerReport run_ser_experiment(const SystemParams& params, const PowerAllocation& alloc,
                             int qam_order, std::size_t trials, std::uint64_t seed,
                             const ExperimentOptions& options = {});

/// Sampled E{1/(beta/lambda + 1)} over eigenvalues lambda of H_u-hat H_u-hat^H
/// from simulated reverse training. Throws std::invalid_argument when
/// samples < 10^4.
double jensen_oracle(const SystemParams& params, const PowerAllocation& alloc,
                     std::size_t samples, std::uint64_t seed);

}  // namespace dce

#include "dce/montecarlo_inl.hpp"
