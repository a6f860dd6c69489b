#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace blmcli {

/// Comma-separated numeric table with a header row. Lines starting with '#'
/// and blank lines are skipped.
struct CsvTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows x columns.size()

  int rows() const { return static_cast<int>(values.rows()); }
  bool has_column(const std::string& name) const;
  /// Column by header name; IOError when absent.
  Eigen::VectorXd column(const std::string& name) const;
  int column_index(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// Whitespace-delimited matrix, one row per line, '#' comments allowed.
Eigen::MatrixXd read_matrix_file(const std::string& path);

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

}  // namespace blmcli
