#include "suparea/cli/output.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "suparea/errors.hpp"

namespace suparea::cli {
namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct CsvCell {
  int precision;
  std::string operator()(std::monostate) const { return ""; }
  std::string operator()(double v) const { return format_double(v, precision); }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(std::uint64_t v) const { return std::to_string(v); }
  std::string operator()(bool v) const { return v ? "true" : "false"; }
  std::string operator()(const std::string& v) const { return csv_escape(v); }
};

struct JsonCell {
  int precision;
  nlohmann::json operator()(std::monostate) const { return nullptr; }
  nlohmann::json operator()(double v) const {
    if (!std::isfinite(v)) return nullptr;
    // Round to the requested digits; the shortest round-trip form then prints them.
    return std::stod(format_double(v, precision));
  }
  nlohmann::json operator()(std::int64_t v) const { return v; }
  nlohmann::json operator()(std::uint64_t v) const { return v; }
  nlohmann::json operator()(bool v) const { return v; }
  nlohmann::json operator()(const std::string& v) const { return v; }
};

nlohmann::json round_doubles(const nlohmann::json& j, int precision) {
  if (j.is_number_float()) return JsonCell{precision}(j.get<double>());
  if (j.is_object() || j.is_array()) {
    nlohmann::json out = j;
    for (auto& v : out) v = round_doubles(v, precision);
    return out;
  }
  return j;
}

}  // namespace

void OutputSpec::validate() const {
  if (precision < 6 || precision > 17) throw DomainError("precision must be in [6, 17]");
  if (destination.empty()) throw DomainError("output destination must not be empty");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.{}g}", v, precision);
}

void write_table(const Table& table, const OutputSpec& spec, std::ostream& out) {
  if (spec.format == Format::json) {
    nlohmann::json doc;
    doc["config"] = table.config;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json r = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i)
        r[table.columns[i]] = std::visit(JsonCell{spec.precision}, row[i]);
      doc["rows"].push_back(std::move(r));
    }
    doc["summary"] = round_doubles(table.summary, spec.precision);
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# " << table.config.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << csv_escape(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << std::visit(CsvCell{spec.precision}, row[i]);
    out << '\n';
  }
  if (!table.summary.empty()) out << "# summary " << round_doubles(table.summary, spec.precision).dump() << '\n';
}

}  // namespace suparea::cli
