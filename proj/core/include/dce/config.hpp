// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dce/estimation.hpp"
#include "dce/params.hpp"

namespace dce {

enum class OutputFormat { csv, json };

/// Everything a CLI command needs. Powers are in dB, as users write them.
struct ExperimentConfig {
  Scheme scheme = Scheme::reciprocal;
  std::vector<double> gammas{0.1, 0.03};
  std::vector<double> paves_db{10, 15, 20, 25, 30};
  double pbar_t_db = 30.0;
  double pbar_l_db = 20.0;
  std::optional<std::size_t> trials;  // unset: per-command default
  std::uint64_t seed = 1;
  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  JensenVariant jensen_variant = JensenVariant::printed;
  std::vector<int> tau_f;  // non-empty: training-length sweep mode
  bool full_scale = false;
  int qam = 64;

  /// Trial count for a command: the explicit value, else 50000 with
  /// full_scale, else the command's desk-scale default.
  std::size_t trials_or(std::size_t desk_default) const;

  /// Channel model at one average power.
  SystemParams system_params(double p_ave_db) const;
  /// Throws Error(Errc::config) on any invalid field.
  void validate() const;
};

/// Parses "a,b,c" and "start:stop:step" (inclusive) lists.
std::vector<double> parse_number_list(const std::string& text);

/// Flat `key = value` text with the CLI flag names as keys (without the
/// leading dashes); '#' starts a comment. Unknown keys, malformed values and
/// duplicate keys throw Error(Errc::config).
ExperimentConfig parse_config_text(const std::string& text,
                                   ExperimentConfig base = ExperimentConfig{});
ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base = ExperimentConfig{});
/// Inverse of parse_config_text; every field is written.
std::string to_config_text(const ExperimentConfig& config);

/// Applies one `key`/`value` pair; the same validation as the file parser.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace dce
