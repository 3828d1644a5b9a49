// SPDX-License-Identifier: Apache-2.0
#include "dce/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "dce/error.hpp"
#include "dce/ostbc.hpp"

namespace dce {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanWithCi mean_with_ci(std::span<const double> samples) {
  MeanWithCi out;
  const double n = static_cast<double>(samples.size());
  if (samples.empty()) return out;
  out.mean = pairwise_sum(samples) / n;
  if (samples.size() < 2) return out;
  std::vector<double> dev(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - out.mean;
    dev[i] = d * d;
  }
  out.half_width_95 = 1.96 * std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
  return out;
}

TrialOutcome simulate_training(const SystemParams& params, const PowerAllocation& alloc,
                               RandomStream& rng, JensenVariant variant) {
  TrialOutcome out;
  for (int attempt = 0;; ++attempt) {
    try {
      if (alloc.scheme == Scheme::reciprocal) {
        out.channels = sample_channels(params, Scheme::reciprocal, rng);
        const ReverseTraining reverse =
            reverse_training(params, alloc.e_r, Scheme::reciprocal, out.channels, rng);
        const EstimateWithError tx = tx_estimate_reciprocal(reverse, params);
        const ForwardTraining forward = forward_training(
            params, Scheme::reciprocal, alloc.e_f, alloc.var_a, tx.estimate, out.channels, rng);
        out.lr_estimate = lr_estimate_reciprocal(forward, params, alloc).estimate;
        out.ur_estimate = ur_estimate(forward, params, alloc).estimate;
      } else {
        out.channels = sample_channels(params, Scheme::non_reciprocal, rng);
        const RoundTripTraining round_trip =
            round_trip_training(params, alloc, out.channels, rng);
        const ReverseTraining reverse =
            reverse_training(params, alloc.e_2, Scheme::non_reciprocal, out.channels, rng);
        const EstimateWithError uplink = tx_estimate_uplink(reverse, params);
        const EstimateWithError downlink =
            tx_estimate_downlink(round_trip, uplink, params, alloc);
        const ForwardTraining forward =
            forward_training(params, Scheme::non_reciprocal, alloc.e_3, alloc.var_a,
                             downlink.estimate, out.channels, rng);
        out.lr_estimate = lr_estimate_nonreciprocal(forward, params, alloc, variant).estimate;
        out.ur_estimate = ur_estimate(forward, params, alloc).estimate;
      }
      return out;
    } catch (const Error& e) {
      if (e.code() != Errc::rank_deficient || attempt >= 100) throw;
      ++out.resampled;
    }
  }
}

namespace {

struct TrialErrors {
  double lr = 0.0;
  double ur = 0.0;
  int resampled = 0;
};

}  // namespace

NmseReport run_nmse_experiment(const SystemParams& params, const PowerAllocation& alloc,
                               std::size_t trials, std::uint64_t seed,
                               const ExperimentOptions& options) {
  if (trials < 100) throw std::invalid_argument("run_nmse_experiment: trials must be >= 100");
  const double lr_cells = static_cast<double>(params.n_t) * params.n_l;
  const double ur_cells = static_cast<double>(params.n_t) * params.n_u;
  const std::function<TrialErrors(std::size_t)> trial = [&](std::size_t i) {
    RandomStream rng(seed, i);
    const TrialOutcome t = simulate_training(params, alloc, rng, options.variant);
    return TrialErrors{(t.lr_estimate - t.channels.h_d).squaredNorm() / lr_cells,
                       (t.ur_estimate - t.channels.g).squaredNorm() / ur_cells, t.resampled};
  };
  const std::vector<TrialErrors> errs = run_trials(trials, options.workers, trial);

  std::vector<double> lr(trials);
  std::vector<double> ur(trials);
  NmseReport report;
  for (std::size_t i = 0; i < trials; ++i) {
    lr[i] = errs[i].lr;
    ur[i] = errs[i].ur;
    report.resampled_trials += errs[i].resampled;
  }
  const MeanWithCi l = mean_with_ci(lr);
  const MeanWithCi u = mean_with_ci(ur);
  report.empirical_lr = l.mean;
  report.half_width_lr = l.half_width_95;
  report.empirical_ur = u.mean;
  report.half_width_ur = u.half_width_95;
  report.trials = trials;
  if (alloc.scheme == Scheme::reciprocal) {
    report.analytic_lr = nmse_l_reciprocal(params, alloc.e_r, alloc.e_f, alloc.var_a);
    report.analytic_ur = nmse_u_reciprocal(params, alloc.e_f, alloc.var_a);
  } else {
    report.analytic_lr = nmse_l_nonreciprocal_approx(params, alloc, options.variant);
    report.analytic_ur = nmse_u_nonreciprocal(params, alloc.e_3, alloc.var_a);
  }
  return report;
}

std::vector<AllocRow> sweep_power_allocation(const SystemParams& params, Scheme scheme,
                                             std::span<const double> gammas,
                                             std::span<const double> paves_db) {
  const std::size_t ng = gammas.size();
  const std::function<AllocRow(std::size_t)> solve_point = [&](std::size_t idx) {
    SystemParams p = params;
    p.p_ave = db_to_linear(paves_db[idx / ng]);
    AllocRow row;
    row.p_ave_db = paves_db[idx / ng];
    row.gamma = gammas[idx % ng];
    const auto [gmin, gmax] = gamma_bounds(p, scheme);
    row.in_range = row.gamma >= gmin && row.gamma <= gmax;
    if (scheme == Scheme::reciprocal) {
      const ReciprocalSolution s = solve_reciprocal(ReciprocalProblem::from_params(p, row.gamma));
      row.alloc = s.alloc;
      row.nmse_l = s.objective;
      row.nmse_u = s.nmse_u;
      row.branch = std::string(to_string(s.branch));
    } else {
      const NonReciprocalSolution s =
          solve_nonreciprocal(NonReciprocalProblem::from_params(p, row.gamma));
      row.alloc = s.alloc;
      row.nmse_l = nmse_l_nonreciprocal_approx(p, s.alloc, JensenVariant::printed);
      row.nmse_u = s.nmse_u;
      row.branch = std::string(to_string(s.branch));
      if (s.branch == NonReciprocalBranch::condensation && !s.trace.converged)
        row.branch += "-not-converged";
      row.iterations = s.iterations;
    }
    return row;
  };
  return run_trials(paves_db.size() * ng, 0, solve_point);
}

namespace {

struct SymbolErrors {
  int lr = 0;
  int ur = 0;
};

int count_errors(const std::array<int, 3>& sent, const std::array<Complex, 3>& soft,
                 const QamConstellation& qam) {
  int errors = 0;
  for (std::size_t k = 0; k < 3; ++k) errors += qam.nearest(soft[k]) != sent[k];
  return errors;
}

}  // namespace

SerReport run_ser_experiment(const SystemParams& params, const PowerAllocation& alloc,
                             int qam_order, std::size_t trials, std::uint64_t seed,
                             const ExperimentOptions& options) {
  if (params.n_t != 4) {
    throw Error(Errc::unsupported_geometry, "SER experiment needs n_t = 4 for the rate-3/4 OSTBC");
  }
  const QamConstellation qam(qam_order);
  const double power = params.p_ave;
  const std::function<SymbolErrors(std::size_t)> trial = [&](std::size_t i) {
    RandomStream rng(seed, i);
    const TrialOutcome t = simulate_training(params, alloc, rng, options.variant);
    std::array<int, 3> sent{};
    std::array<Complex, 3> symbols{};
    for (std::size_t k = 0; k < 3; ++k) {
      sent[k] = qam.random_index(rng);
      symbols[k] = qam.symbol(sent[k]);
    }
    const CMatrix x = std::sqrt(power / 3.0) * ostbc_rate34(symbols);
    const CMatrix y_l = x * t.channels.h_d + rng.gaussian_matrix(4, params.n_l, 1.0);
    const CMatrix y_u = x * t.channels.g + rng.gaussian_matrix(4, params.n_u, 1.0);
    return SymbolErrors{count_errors(sent, ostbc_combine(y_l, t.lr_estimate, power), qam),
                        count_errors(sent, ostbc_combine(y_u, t.ur_estimate, power), qam)};
  };
  const std::vector<SymbolErrors> errs = run_trials(trials, options.workers, trial);
  std::vector<double> lr(trials);
  std::vector<double> ur(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    lr[i] = errs[i].lr / 3.0;
    ur[i] = errs[i].ur / 3.0;
  }
  const MeanWithCi l = mean_with_ci(lr);
  const MeanWithCi u = mean_with_ci(ur);
  SerReport r;
  r.trials = trials;
  r.symbols = 3 * trials;
  r.qam_order = qam_order;
  r.ser_lr = l.mean;
  r.ser_ur = u.mean;
  r.half_width_lr = l.half_width_95;
  r.half_width_ur = u.half_width_95;
  return r;
}

double jensen_oracle(const SystemParams& params, const PowerAllocation& alloc,
                     std::size_t samples, std::uint64_t seed) {
  if (samples < 10000) throw std::invalid_argument("jensen_oracle: samples must be >= 10^4");
  const double beta = downlink_beta(params, alloc.e_0, alloc.e_1, alloc.e_2);
  const std::function<double(std::size_t)> draw = [&](std::size_t i) {
    if (std::isinf(beta)) return 0.0;
    RandomStream rng(seed, i);
    const ChannelRealization ch = sample_channels(params, Scheme::non_reciprocal, rng);
    const ReverseTraining reverse =
        reverse_training(params, alloc.e_2, Scheme::non_reciprocal, ch, rng);
    const CMatrix hu = tx_estimate_uplink(reverse, params).estimate;
    const CMatrix k = hu * hu.adjoint();
    const Eigen::VectorXd lambda = Eigen::SelfAdjointEigenSolver<CMatrix>(k).eigenvalues();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      const double l = std::max(0.0, lambda(j));
      acc += beta == 0.0 ? 1.0 : l / (l + beta);
    }
    return acc / static_cast<double>(lambda.size());
  };
  const std::vector<double> values = run_trials(samples, 0, draw);
  return pairwise_sum(values) / static_cast<double>(samples);
}

}  // namespace dce
