#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace suparea::cli {

enum class Format { csv, json };

struct OutputSpec {
  Format format = Format::csv;
  /// File path, or "-" for stdout.
  std::string destination = "-";
  /// Significant digits for floating-point cells.
  int precision = 12;

  void validate() const;
};

/// Empty cells print as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json summary = nlohmann::json::object();

  void add_row(std::vector<Cell> row);
};

std::string format_double(double v, int precision);

/// CSV: a "# {config}" line, the column header, the rows, then "# summary {…}".
/// JSON: {"config": …, "rows": [{column: value}], "summary": …}.
void write_table(const Table& table, const OutputSpec& spec, std::ostream& out);

}  // namespace suparea::cli
