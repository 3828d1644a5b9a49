// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace dce {

enum class Errc {
  rank_deficient,
  singular_regressor,
  infeasible_gamma,
  no_feasible_point,
  infeasible,
  not_converged,
  stalled,
  unsupported_geometry,
  config,
  verification_failed,
};

const char* to_string(Errc code) noexcept;

/// Single exception type for all library failures; `code()` tells them apart.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dce
