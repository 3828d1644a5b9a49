// SPDX-License-Identifier: Apache-2.0
#include "dce/table.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#ifndef DCE_VERSION
#define DCE_VERSION "v0.0.0-unknown"
#endif

namespace dce {

namespace {

constexpr std::string_view footer_prefix_csv = "# generated: ";
constexpr std::string_view footer_prefix_json = "{\"generated\":";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* type_name(ColumnType t) {
  switch (t) {
    case ColumnType::real: return "real";
    case ColumnType::integer: return "integer";
    case ColumnType::text: return "text";
  }
  return "text";
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

const char* library_version() noexcept { return DCE_VERSION; }

ResultTable::ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("ResultTable: row width mismatch");
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool ok = (columns_[i].type == ColumnType::real && std::holds_alternative<double>(row[i])) ||
                    (columns_[i].type == ColumnType::integer &&
                     std::holds_alternative<std::int64_t>(row[i])) ||
                    (columns_[i].type == ColumnType::text &&
                     std::holds_alternative<std::string>(row[i]));
    if (!ok) throw std::invalid_argument("ResultTable: cell type mismatch in " + columns_[i].name);
  }
  rows_.push_back(std::move(row));
}

void ResultTable::set_metadata(const std::string& key, const std::string& value) {
  metadata_[key] = value;
}

std::size_t ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  throw std::out_of_range("ResultTable: no column " + name);
}

double ResultTable::real(std::size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("ResultTable: column " + column + " is text");
}

const std::string& ResultTable::text(std::size_t row, const std::string& column) const {
  return std::get<std::string>(rows_.at(row).at(column_index(column)));
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (const auto& [k, v] : metadata_) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += csv_field(columns_[i].name);
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string ResultTable::to_json() const {
  nlohmann::json doc;
  doc["columns"] = nlohmann::json::array();
  for (const auto& c : columns_) doc["columns"].push_back({{"name", c.name}, {"type", type_name(c.type)}});
  doc["metadata"] = metadata_;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& cell = row[i];
      if (const auto* d = std::get_if<double>(&cell)) {
        // JSON has no infinities; keep them as the same strings the CSV uses.
        r[columns_[i].name] = std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(format_real(*d));
      } else if (const auto* n = std::get_if<std::int64_t>(&cell)) {
        r[columns_[i].name] = *n;
      } else {
        r[columns_[i].name] = std::get<std::string>(cell);
      }
    }
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump() + "\n";
}

std::string ResultTable::serialize(OutputFormat format, bool with_footer) const {
  if (format == OutputFormat::csv) {
    std::string out = to_csv();
    if (with_footer) out += std::string(footer_prefix_csv) + utc_timestamp() + "\n";
    return out;
  }
  std::string out = to_json();
  if (with_footer) out += std::string(footer_prefix_json) + "\"" + utc_timestamp() + "\"}\n";
  return out;
}

std::string strip_footer(const std::string& s) {
  if (s.empty()) return s;
  std::size_t end = s.size();
  if (s[end - 1] == '\n') --end;
  const std::size_t start = s.rfind('\n', end == 0 ? 0 : end - 1);
  const std::size_t line_start = start == std::string::npos ? 0 : start + 1;
  const std::string_view last(s.data() + line_start, end - line_start);
  if (last.starts_with(footer_prefix_csv) || last.starts_with(footer_prefix_json)) {
    return s.substr(0, line_start);
  }
  return s;
}

}  // namespace dce
