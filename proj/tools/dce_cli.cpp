// SPDX-License-Identifier: Apache-2.0
// dce: power allocation, NMSE, SER and verification tables from the command line.
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "dce/commands.hpp"
#include "dce/error.hpp"

namespace {

struct Options {
  std::string config_path;
  std::map<std::string, std::string> values;  // flag name -> raw text, as given
  bool full_scale = false;
};

void add_common_options(CLI::App& cmd, Options& opts) {
  cmd.add_option("--config", opts.config_path, "Flat key = value file; flags override it");
  const std::pair<const char*, const char*> flags[] = {
      {"scheme", "reciprocal | non-reciprocal"},
      {"gamma", "UR NMSE floor(s): list a,b or range start:stop:step"},
      {"pave-db", "Average power(s) in dB: list or range"},
      {"pbar-t-db", "Transmitter peak power in dB"},
      {"pbar-l-db", "LR peak power in dB"},
      {"trials", "Monte-Carlo trials (>= 100)"},
      {"seed", "Master seed"},
      {"out", "Output file (default: stdout)"},
      {"format", "csv | json"},
      {"jensen-variant", "printed | sigma-squared"},
      {"tau-f", "Forward training lengths; switches nmse to the tau_F sweep"},
      {"qam", "QAM order for ser: 4, 16 or 64"},
  };
  for (const auto& [name, help] : flags) {
    cmd.add_option_function<std::string>(
        std::string("--") + name,
        [&opts, key = std::string(name)](const std::string& v) { opts.values[key] = v; }, help);
  }
  cmd.add_flag("--full-scale", opts.full_scale, "Use the published trial counts (50000)");
}

dce::ExperimentConfig build_config(const Options& opts) {
  dce::ExperimentConfig config;
  if (!opts.config_path.empty()) config = dce::load_config_file(opts.config_path, config);
  for (const auto& [key, value] : opts.values) dce::apply_config_value(config, key, value);
  if (opts.full_scale) config.full_scale = true;
  return config;
}

void emit(const dce::ResultTable& table, const dce::ExperimentConfig& config) {
  const std::string text = table.serialize(config.format);
  if (config.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) throw dce::Error(dce::Errc::config, "cannot write '" + config.out + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discriminatory channel estimation: allocation, NMSE and SER tables"};
  app.require_subcommand(1);
  Options opts;
  CLI::App* alloc = app.add_subcommand("alloc", "Solve the power allocation over a sweep");
  CLI::App* nmse = app.add_subcommand("nmse", "Analytic and Monte-Carlo NMSE over a sweep");
  CLI::App* ser = app.add_subcommand("ser", "OSTBC symbol error rates over a sweep");
  CLI::App* verify = app.add_subcommand("verify", "Run the oracle verification suite");
  for (CLI::App* cmd : {alloc, nmse, ser, verify}) add_common_options(*cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dce::exit_config;
  }

  try {
    const dce::ExperimentConfig config = build_config(opts);
    if (alloc->parsed()) {
      emit(dce::cmd_alloc(config), config);
    } else if (nmse->parsed()) {
      emit(dce::cmd_nmse(config), config);
    } else if (ser->parsed()) {
      emit(dce::cmd_ser(config), config);
    } else {
      const dce::ResultTable table = dce::cmd_verify(config);
      emit(table, config);
      if (!dce::all_passed(table)) {
        std::cerr << "dce: verification failed\n";
        return dce::exit_verification;
      }
    }
  } catch (const dce::Error& e) {
    std::cerr << "dce: " << dce::to_string(e.code()) << ": " << e.what() << '\n';
    return dce::exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    std::cerr << "dce: config: " << e.what() << '\n';
    return dce::exit_config;
  }
  return dce::exit_ok;
}
