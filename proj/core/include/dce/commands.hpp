// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "dce/alloc_gp.hpp"
#include "dce/error.hpp"
#include "dce/config.hpp"
#include "dce/table.hpp"

namespace dce {

/// Process exit codes of the CLI.
enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_infeasible = 3,
  exit_geometry = 4,
  exit_verification = 5,
};

int exit_code_for(Errc code) noexcept;

/// Power allocation per (P_ave, gamma); powers in dB, "-inf" for zero.
ResultTable cmd_alloc(const ExperimentConfig& config);
/// Analytic and empirical NMSE per sweep point, or the training-length sweep
/// when config.tau_f is non-empty.
ResultTable cmd_nmse(const ExperimentConfig& config);
/// OSTBC symbol error rates per sweep point.
ResultTable cmd_ser(const ExperimentConfig& config);

/// Hooks a test can replace to check that the verification suite notices.
struct VerifyHooks {
  std::function<ThetaExponents(const SystemParams&, const GpState&)> theta = theta_exponents;
};

/// Oracle suite; one pass/fail row per check. The caller maps any failed row
/// to exit code 5.
ResultTable cmd_verify(const ExperimentConfig& config, const VerifyHooks& hooks = {});
bool all_passed(const ResultTable& verify_table);

}  // namespace dce
