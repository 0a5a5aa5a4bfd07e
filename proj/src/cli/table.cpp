#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "condlight/cli.hpp"

namespace condlight::cli {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

nlohmann::ordered_json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw std::out_of_range("no column named " + name);
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw UsageError("unknown format '" + s + "' (expected csv or json)");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      c);
}

void write_csv(const Table& table, std::ostream& out) {
  for (const auto& [key, value] : table.metadata) {
    out << "# " << key << ": " << format_cell(value) << '\n';
  }
  for (const auto& col : table.columns) {
    out << "# column " << col.name << ": " << col.description << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i].name;
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_escape(format_cell(row[i]));
    }
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  auto& meta = doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.metadata) meta[key] = to_json(value);
  auto& cols = doc["columns"] = nlohmann::ordered_json::array();
  for (const auto& col : table.columns) {
    cols.push_back({{"name", col.name}, {"description", col.description}});
  }
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i].name] = to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

void write_table(const Table& table, Format format, std::ostream& out) {
  if (format == Format::json) {
    write_json(table, out);
  } else {
    write_csv(table, out);
  }
}

}  // namespace condlight::cli
