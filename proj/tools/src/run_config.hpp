#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blm/blm.hpp"
#include "tabular.hpp"
#include "toml.hpp"

namespace blmcli {

/// One parsed run configuration: [prior], [model], [output] and [dlm]
/// tables. Matrix-valued entries may point at whitespace-delimited files,
/// resolved relative to the current working directory.
struct RunConfig {
  // [prior]
  std::vector<double> theta0;  // empty = zero fill, single value = scalar fill
  std::optional<std::string> A0_file;
  double A0_scale = 0.001;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  std::optional<double> lambda;

  // [model]
  std::string label;
  std::optional<int> polynomial;          // p terms [1, x, ..., x^{p-1}]
  std::vector<std::string> columns;       // explicit design columns
  bool intercept = true;                  // only with columns
  std::string x_column = "x";
  std::string y_column = "y";
  std::optional<std::string> covariance_file;  // absent = identity
  std::optional<blm::KernelSpec> kernel;
  std::vector<std::string> location_columns;  // kernel models; default {x_column}

  // [output]
  std::vector<double> quantiles{0.05, 0.5, 0.95};

  // [dlm]
  std::optional<std::string> dlm_G_file;
  std::optional<std::string> dlm_W_file;
  double dlm_W_scale = 0.0;

  static RunConfig load(const std::string& path);

  /// Design matrix from the configured rule applied to `table` (used both
  /// for training data and for prediction targets).
  Eigen::MatrixXd build_design(const CsvTable& table) const;
  int design_width() const;

  blm::NormalGammaParams build_prior(int p) const;
  /// Training-side model: identity, matrix-file or kernel covariance.
  blm::ModelSpec build_model(Eigen::MatrixXd design, const CsvTable& table) const;
  /// Locations matrix for kernel models.
  Eigen::MatrixXd build_locations(const CsvTable& table) const;
};

/// Parses "0.05,0.5,0.95"; values must lie strictly inside (0,1). Returned
/// sorted ascending.
std::vector<double> parse_quantiles(const std::string& spec);

}  // namespace blmcli
