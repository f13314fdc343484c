#include "cbohf/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbohf/errors.hpp"

namespace cbohf {

using nlohmann::json;

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InvalidInput("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                       std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& col) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == col) return i;
  }
  throw InvalidInput("table '" + name + "' has no column '" + col + "'");
}

double Table::number(std::size_t row, const std::string& col) const {
  const auto& c = rows.at(row).at(column(col));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  throw InvalidInput("table '" + name + "': column '" + col + "' is not numeric");
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", *d == 0.0 ? 0.0 : *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' || c == '\r' ? ' ' : c;
  }
  return out + "\"";
}

json json_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return std::strtod(format_cell(cell).c_str(), nullptr);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  return std::get<std::string>(cell);
}

}  // namespace

double identity_violation(const Table& table) {
  double worst = 0.0;
  for (const auto& id : table.identities) {
    const std::size_t t = table.column(id.total);
    std::vector<std::size_t> parts;
    for (const auto& p : id.parts) parts.push_back(table.column(p));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double total = table.number(r, table.columns[t]);
      double sum = 0.0;
      for (auto p : parts) sum += table.number(r, table.columns[p]);
      if (!std::isfinite(total) || !std::isfinite(sum)) continue;
      worst = std::max(worst, std::abs(total - sum));
    }
  }
  return worst;
}

std::string to_csv(const Table& table, const json& config) {
  std::ostringstream os;
  os << "# config: " << config.dump() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << csv_escape(table.columns[i]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(row[i]));
    os << "\n";
  }
  return os.str();
}

json to_json(const Table& table, const json& config) {
  json j;
  j["table"] = table.name;
  j["config"] = config;
  j["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::vector<std::string> emit(const Table& table, const json& config, const std::vector<std::string>& formats,
                              const std::string& directory) {
  const double bad = identity_violation(table);
  if (bad > 1e-10) {
    throw Error("table '" + table.name + "' violates an energy identity by " + std::to_string(bad));
  }
  namespace fs = std::filesystem;
  const fs::path dir(directory.empty() ? "." : directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  std::vector<std::string> written;
  for (const auto& fmt : formats) {
    std::string text;
    if (fmt == "csv") {
      text = to_csv(table, config);
    } else if (fmt == "json") {
      text = to_json(table, config).dump(1) + "\n";
    } else {
      throw InvalidInput("unknown output format '" + fmt + "'");
    }
    const fs::path path = dir / (table.name + "." + fmt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    written.push_back(path.string());
  }
  return written;
}

}  // namespace cbohf
