#pragma once

#include <string>
#include <vector>

#include "olsaudit/errors.hpp"

namespace olsaudit {

/// A parsed CSV file: one header row plus string cells. Quoting follows the
/// usual double-quote convention ("" escapes a quote inside a quoted field).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws DataError (MissingColumn) when absent.
  int col(const std::string& name) const;
  long n_rows() const { return long(rows.size()); }
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

void write_csv(const std::string& path, const CsvTable& table);
std::string format_csv(const CsvTable& table);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Strict double parse; throws DataError with coordinates on failure.
double parse_cell_double(const std::string& cell, long row, const std::string& col);

}  // namespace olsaudit
