// SPDX-License-Identifier: Apache-2.0
#include "dce/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dce/error.hpp"
#include "dce/table.hpp"

namespace dce {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::config, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    fail("invalid number '" + t + "' for " + key);
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    fail("invalid non-negative integer '" + t + "' for " + key);
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  fail("invalid boolean '" + t + "' for " + key);
}

std::string normalize_key(std::string key) {
  key = trim(key);
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_real(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail("empty element in list '" + text + "'");
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_double(item, "list"));
      continue;
    }
    const auto colon2 = item.find(':', colon + 1);
    if (colon2 == std::string::npos) fail("range '" + item + "' must be start:stop:step");
    const double start = parse_double(item.substr(0, colon), "range start");
    const double stop = parse_double(item.substr(colon + 1, colon2 - colon - 1), "range stop");
    const double step = parse_double(item.substr(colon2 + 1), "range step");
    if (step == 0.0 || (stop - start) / step < 0.0) fail("range '" + item + "' is empty");
    const double count = std::floor((stop - start) / step + 1e-9);
    if (count > 10000) fail("range '" + item + "' has too many points");
    for (int k = 0; k <= static_cast<int>(count); ++k) out.push_back(start + k * step);
  }
  if (out.empty()) fail("empty list");
  return out;
}

std::size_t ExperimentConfig::trials_or(std::size_t desk_default) const {
  if (trials) return *trials;
  return full_scale ? 50000 : desk_default;
}

SystemParams ExperimentConfig::system_params(double p_ave_db) const {
  SystemParams p = SystemParams::defaults(p_ave_db);
  p.p_bar_t = db_to_linear(pbar_t_db);
  p.p_bar_l = db_to_linear(pbar_l_db);
  return p;
}

void ExperimentConfig::validate() const {
  if (gammas.empty()) fail("gamma list is empty");
  if (paves_db.empty()) fail("pave-db list is empty");
  if (trials && *trials < 100) fail("trials must be at least 100");
  if (qam != 4 && qam != 16 && qam != 64) fail("qam must be 4, 16 or 64");
  const SystemParams base = system_params(paves_db.front());
  for (int tau : tau_f) {
    if (tau < base.n_t) fail("tau-f values must be at least n_t = " + std::to_string(base.n_t));
  }
  if (!tau_f.empty() && scheme != Scheme::reciprocal) {
    fail("tau-f sweeps are defined for the reciprocal scheme only");
  }
}

void apply_config_value(ExperimentConfig& c, const std::string& raw_key, const std::string& raw) {
  const std::string key = normalize_key(raw_key);
  const std::string value = trim(raw);
  if (key == "scheme") {
    c.scheme = parse_scheme(value);
  } else if (key == "gamma") {
    c.gammas = parse_number_list(value);
  } else if (key == "pave-db") {
    c.paves_db = parse_number_list(value);
  } else if (key == "pbar-t-db") {
    c.pbar_t_db = parse_double(value, key);
  } else if (key == "pbar-l-db") {
    c.pbar_l_db = parse_double(value, key);
  } else if (key == "trials") {
    c.trials = static_cast<std::size_t>(parse_u64(value, key));
    if (*c.trials < 100) fail("trials must be at least 100");
  } else if (key == "seed") {
    c.seed = parse_u64(value, key);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "format") {
    if (value == "csv") {
      c.format = OutputFormat::csv;
    } else if (value == "json") {
      c.format = OutputFormat::json;
    } else {
      fail("format must be csv or json");
    }
  } else if (key == "jensen-variant") {
    c.jensen_variant = parse_jensen_variant(value);
  } else if (key == "tau-f") {
    c.tau_f.clear();
    if (!value.empty()) {
      for (double v : parse_number_list(value)) {
        if (v != std::floor(v) || v < 1 || v > 1e6) fail("tau-f values must be positive integers");
        c.tau_f.push_back(static_cast<int>(v));
      }
    }
  } else if (key == "full-scale") {
    c.full_scale = parse_bool(value, key);
  } else if (key == "qam") {
    const auto q = parse_u64(value, key);
    if (q != 4 && q != 16 && q != 64) fail("qam must be 4, 16 or 64");
    c.qam = static_cast<int>(q);
  } else {
    fail("unknown configuration key '" + key + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
  std::stringstream ss(text);
  std::string line;
  std::set<std::string> seen;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = normalize_key(line.substr(0, eq));
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
    apply_config_value(base, key, line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "scheme = " << to_string(c.scheme) << '\n';
  o << "gamma = " << join(c.gammas) << '\n';
  o << "pave-db = " << join(c.paves_db) << '\n';
  o << "pbar-t-db = " << format_real(c.pbar_t_db) << '\n';
  o << "pbar-l-db = " << format_real(c.pbar_l_db) << '\n';
  if (c.trials) o << "trials = " << *c.trials << '\n';
  o << "seed = " << c.seed << '\n';
  o << "out = " << c.out << '\n';
  o << "format = " << (c.format == OutputFormat::csv ? "csv" : "json") << '\n';
  o << "jensen-variant = " << to_string(c.jensen_variant) << '\n';
  o << "tau-f = " << join(c.tau_f) << '\n';
  o << "full-scale = " << (c.full_scale ? "true" : "false") << '\n';
  o << "qam = " << c.qam << '\n';
  return o.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.scheme == b.scheme && a.gammas == b.gammas && a.paves_db == b.paves_db &&
         a.pbar_t_db == b.pbar_t_db && a.pbar_l_db == b.pbar_l_db && a.trials == b.trials &&
         a.seed == b.seed && a.out == b.out && a.format == b.format &&
         a.jensen_variant == b.jensen_variant && a.tau_f == b.tau_f &&
         a.full_scale == b.full_scale && a.qam == b.qam;
}

}  // namespace dce
