#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dyncop/copula.hpp"
#include "dyncop/correlation_path.hpp"

namespace dyncop {

/// Shortest-roundtrip formatting used in every CSV this library writes.
std::string format_double(double value);

/// Comma-separated, '.' decimals, mandatory header row. Lines starting with
/// '#' and blank lines are skipped. Throws ConfigError naming the row on
/// malformed input.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row

  /// Index of a column, or -1.
  int column(const std::string& name) const;
  double number(std::size_t row, int col) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Paired observations from columns (u, v) or (x, y), in row order.
PairedSample read_paired_sample(std::istream& in);
PairedSample read_paired_sample_file(const std::string& path);

/// Knots for a tabulated path from columns (s, m).
std::vector<Knot> read_knots_file(const std::string& path);

}  // namespace dyncop
