#include "lendsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lendsim/errors.hpp"

namespace lendsim::io {

namespace {

std::vector<std::string> split_line(const std::string& line,
                                    std::size_t line_number,
                                    const std::string& source) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      if (!cell.empty()) {
        throw SchemaError(source + ":" + std::to_string(line_number) +
                          ": stray quote inside unquoted cell");
      }
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) {
    throw SchemaError(source + ":" + std::to_string(line_number) +
                      ": unterminated quoted cell");
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int CsvTable::require_column(const std::string& name) const {
  const int idx = column(name);
  if (idx < 0) {
    throw SchemaError("missing required column '" + name + "'");
  }
  return idx;
}

CsvTable parse_csv(std::istream& in, const std::string& source_name) {
  CsvTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;  // trailing newline
    auto cells = split_line(line, line_number, source_name);
    if (line_number == 1) {
      table.header = std::move(cells);
    } else {
      if (cells.size() != table.header.size()) {
        throw SchemaError(source_name + ":" + std::to_string(line_number) +
                          ": expected " + std::to_string(table.header.size()) +
                          " cells, got " + std::to_string(cells.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (table.header.empty()) {
    throw SchemaError(source_name + ": missing header row");
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open " + path.string());
  }
  return parse_csv(in, path.filename().string());
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings on any platform
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
  auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      const auto& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : c) {
          if (ch == '"') out << '"';
          out << ch;
        }
        out << '"';
      } else {
        out << c;
      }
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
}

double parse_double_cell(const std::string& cell, std::size_t row_number,
                         const std::string& column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw SchemaError("row " + std::to_string(row_number) + ", column '" +
                      column + "': not a number: '" + cell + "'");
  }
}

bool parse_bool01_cell(const std::string& cell, std::size_t row_number,
                       const std::string& column) {
  if (cell == "0") return false;
  if (cell == "1") return true;
  throw SchemaError("row " + std::to_string(row_number) + ", column '" +
                    column + "': expected 0 or 1, got '" + cell + "'");
}

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

}  // namespace lendsim::io
