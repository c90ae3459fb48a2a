#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace lendsim::io {

// Header-first CSV with RFC-style quoting.  Row numbers below are 1-based
// file line numbers (header is line 1) so schema errors point at the file.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;          // -1 when absent
  int require_column(const std::string& name) const;  // SchemaError when absent
};

CsvTable parse_csv(std::istream& in, const std::string& source_name);
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Numeric cell parsers; row_number is the file line for error messages.
double parse_double_cell(const std::string& cell, std::size_t row_number,
                         const std::string& column);
bool parse_bool01_cell(const std::string& cell, std::size_t row_number,
                       const std::string& column);

// Shortest-ish round-trip formatting: %.17g preserves doubles exactly,
// %.12g is used for report values.
std::string format_double(double v, int precision = 12);

}  // namespace lendsim::io
