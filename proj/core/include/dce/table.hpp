// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dce/config.hpp"

namespace dce {

enum class ColumnType { real, integer, text };

struct Column {
  std::string name;
  ColumnType type = ColumnType::real;
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// A typed result table. Serialization is byte-stable for fixed contents;
/// the generation timestamp lives only in a trailing footer line.
class ResultTable {
 public:
  explicit ResultTable(std::vector<Column> columns);

  void add_row(std::vector<Cell> row);
  void set_metadata(const std::string& key, const std::string& value);

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }

  std::size_t column_index(const std::string& name) const;
  double real(std::size_t row, const std::string& column) const;
  const std::string& text(std::size_t row, const std::string& column) const;

  /// RFC 4180 quoting, '.' decimal point, 17 significant digits, header row,
  /// metadata as leading '#' lines.
  std::string to_csv() const;
  /// Single-line key-sorted JSON document.
  std::string to_json() const;
  std::string serialize(OutputFormat format, bool with_footer = true) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::map<std::string, std::string> metadata_;
};

/// Shortest-round-trip-safe rendering with 17 significant digits; infinities
/// as "inf"/"-inf".
std::string format_real(double value);

/// Removes the footer line so two outputs can be compared byte for byte.
std::string strip_footer(const std::string& serialized);

const char* library_version() noexcept;

}  // namespace dce
