#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ergo/cli/config.hpp"

namespace ergo::cli {

using ordered_json = nlohmann::ordered_json;

using Cell = std::variant<double, std::int64_t, std::string>;

/// A labeled table plus free-form parameters and summary. CSV carries only
/// the table; JSON carries everything.
struct Report {
  std::string kind;
  ordered_json parameters = ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  ordered_json summary;  // null when the kind has no summary

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_cell(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return csv_field(std::get<std::string>(c));
}

inline ordered_json json_cell(const Cell& c) {
  return std::visit([](const auto& v) { return ordered_json(v); }, c);
}

}  // namespace detail

inline void write_csv(const Report& r, std::ostream& out) {
  for (std::size_t k = 0; k < r.columns.size(); ++k) {
    out << (k ? "," : "") << detail::csv_field(r.columns[k]);
  }
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << detail::csv_cell(row[k]);
    out << '\n';
  }
}

inline ordered_json to_json(const Report& r) {
  ordered_json j;
  j["kind"] = r.kind;
  j["parameters"] = r.parameters;
  j["columns"] = r.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json jr = ordered_json::array();
    for (const auto& c : row) jr.push_back(detail::json_cell(c));
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  if (!r.summary.is_null()) j["summary"] = r.summary;
  return j;
}

inline void write_json(const Report& r, std::ostream& out) { out << to_json(r).dump(2) << '\n'; }

inline void write_report(const Report& r, Format f, std::ostream& out) {
  if (f == Format::csv) {
    write_csv(r, out);
  } else {
    write_json(r, out);
  }
}

}  // namespace ergo::cli
