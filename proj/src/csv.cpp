#include "slabspike/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slabspike/errors.hpp"

namespace slabspike {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

double parse_number(const std::string& field, std::size_t line, const std::string& column) {
  if (field.empty() || field == "NA" || field == "na") throw DataError("missing value in column '" + column + "'", line);
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError("non-numeric value '" + field + "' in column '" + column + "'", line);
  if (!std::isfinite(value)) throw DataError("missing or non-finite value in column '" + column + "'", line);
  return value;
}

}  // namespace

Index CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<Index>(i);
  return -1;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw DataError("empty input: no header row");
  table.header = split(line);
  for (const auto& name : table.header)
    if (name.empty()) throw DataError("empty column name in header", line_no);

  const auto width = table.header.size();
  std::vector<double> flat;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != width)
      throw DataError("expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()),
                      line_no);
    for (std::size_t j = 0; j < width; ++j) flat.push_back(parse_number(fields[j], line_no, table.header[j]));
    ++rows;
  }
  table.values.resize(static_cast<Index>(rows), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < width; ++j)
      table.values(static_cast<Index>(r), static_cast<Index>(j)) = flat[r * width + j];
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(r, j));
    out << '\n';
  }
}

}  // namespace slabspike
