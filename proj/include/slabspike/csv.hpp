#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slabspike/types.hpp"

namespace slabspike {

/// A numeric table read from a CSV file with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;  // rows x header.size()

  /// Column position of `name`, or -1.
  Index column(const std::string& name) const;
};

/// Parses comma-separated numeric data.  Every data row must have as many
/// fields as the header; empty fields and NA/NaN are rejected with the line
/// number (no imputation).
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Writes `values` with 17 significant digits.
void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values);

/// %.17g formatting used for every numeric artifact.
std::string format_double(double value);

}  // namespace slabspike
