#include "tabular.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "io_errors.hpp"

namespace blmcli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(trim(field));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_field(const std::string& field, const std::string& file, int line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(file, line, "expected a number, got '" + field + "'");
  }
  return value;
}

bool skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

}  // namespace

bool CsvTable::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

int CsvTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw IOError("data has no column named '" + name + "'");
  }
  return static_cast<int>(it - columns.begin());
}

Eigen::VectorXd CsvTable::column(const std::string& name) const {
  return values.col(column_index(name));
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IOError("cannot open data file '" + path + "'");
  }
  std::string line;
  int lineno = 0;

  CsvTable table;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    table.columns = split_csv_line(line);
    break;
  }
  if (table.columns.empty()) {
    throw ParseError(path, lineno, "missing header row");
  }

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != table.columns.size()) {
      throw ParseError(path, lineno,
                       "expected " + std::to_string(table.columns.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) {
      row.push_back(parse_field(f, path, lineno));
    }
    rows.push_back(std::move(row));
  }

  table.values.resize(rows.size(), table.columns.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return table;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IOError("cannot open matrix file '" + path + "'");
  }
  std::string line;
  int lineno = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string field;
    while (fields >> field) {
      row.push_back(parse_field(field, path, lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path, lineno, "inconsistent number of columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(path, lineno, "matrix file is empty");
  }
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return m;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace blmcli
