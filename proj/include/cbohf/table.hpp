#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cbohf {

using Cell = std::variant<double, long long, std::string>;

/// Column `total` must equal the sum of `parts` in every row.
struct TableIdentity {
  std::string total;
  std::vector<std::string> parts;
};

/// Named result table with a fixed column order.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<TableIdentity> identities;

  Table() = default;
  Table(std::string name, std::vector<std::string> columns) : name(std::move(name)), columns(std::move(columns)) {}

  /// Appends a row; throws InvalidInput if the cell count does not match.
  void add_row(std::vector<Cell> row);
  /// Column index; throws InvalidInput for an unknown column.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
};

/// 12 significant digits ("%.11e"); "nan"/"inf" for non-finite values.
std::string format_cell(const Cell& cell);

/// Largest identity violation over rows whose cells are all finite.
double identity_violation(const Table& table);

/// CSV text: "# config: <json>" line, header row, one line per row.
std::string to_csv(const Table& table, const nlohmann::json& config);
/// JSON mirror holding the same rounded numbers as the CSV.
nlohmann::json to_json(const Table& table, const nlohmann::json& config);

/// Writes <dir>/<name>.csv and/or <dir>/<name>.json.  Identities are
/// re-checked first (1e-10); a violation throws Error.  I/O failures throw
/// IoError naming the path.  Returns the written paths.
std::vector<std::string> emit(const Table& table, const nlohmann::json& config, const std::vector<std::string>& formats,
                              const std::string& directory);

}  // namespace cbohf
