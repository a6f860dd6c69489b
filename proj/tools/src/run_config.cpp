#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>

#include "io_errors.hpp"

namespace blmcli {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

blm::KernelSpec::Family kernel_family_from_name(const std::string& name) {
  if (name == "squared-exponential" || name == "sqexp") {
    return blm::KernelSpec::Family::SquaredExponential;
  }
  if (name == "exponential") return blm::KernelSpec::Family::Exponential;
  if (name == "matern32" || name == "matern-3/2") return blm::KernelSpec::Family::Matern32;
  throw IOError("unknown kernel family '" + name +
                "' (expected squared-exponential, exponential or matern32)");
}

std::vector<std::string> string_list(const TomlValue& v, const std::string& context) {
  std::vector<std::string> out;
  for (const TomlValue& item : v.as_array(context)) {
    out.push_back(item.as_string(context));
  }
  return out;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  const TomlDocument doc = parse_toml_file(path);
  RunConfig cfg;

  const TomlTable& prior = doc.table("prior");
  if (const TomlValue* t0 = prior.find("theta0")) {
    if (t0->is_array()) {
      for (const TomlValue& v : t0->as_array(path + ": theta0")) {
        cfg.theta0.push_back(v.as_number(path + ": theta0"));
      }
    } else {
      cfg.theta0.push_back(t0->as_number(path + ": theta0"));
    }
  }
  if (const TomlValue* a0 = prior.find("A0")) {
    if (a0->is_string()) {
      cfg.A0_file = a0->as_string(path + ": A0");
    } else {
      cfg.A0_scale = a0->as_number(path + ": A0");
      if (!(cfg.A0_scale > 0.0)) throw IOError(path + ": A0 scale must be positive");
    }
  }
  cfg.alpha0 = prior.number_or("alpha0", 1.0);
  cfg.beta0 = prior.number_or("beta0", 1.0);
  if (const TomlValue* lam = prior.find("lambda")) {
    cfg.lambda = lam->as_number(path + ": lambda");
    if (!(*cfg.lambda > 0.0)) throw IOError(path + ": fixed lambda must be positive");
  }

  const TomlTable& model = doc.table("model");
  cfg.label = model.string_or("label", std::filesystem::path(path).stem().string());
  if (cfg.label.empty() || cfg.label.find_first_of(" \t,") != std::string::npos) {
    throw IOError(path + ": label must be nonempty and free of whitespace and commas");
  }
  if (const TomlValue* poly = model.find("polynomial")) {
    const double p = poly->as_number(path + ": polynomial");
    if (p < 1.0 || p != std::floor(p)) {
      throw IOError(path + ": polynomial must be a positive integer (number of terms)");
    }
    cfg.polynomial = static_cast<int>(p);
  }
  if (const TomlValue* cols = model.find("columns")) {
    cfg.columns = string_list(*cols, path + ": columns");
    if (cfg.columns.empty()) throw IOError(path + ": columns must not be empty");
  }
  if (cfg.polynomial && !cfg.columns.empty()) {
    throw IOError(path + ": choose either polynomial or columns, not both");
  }
  cfg.intercept = model.bool_or("intercept", true);
  cfg.x_column = model.string_or("x_column", "x");
  cfg.y_column = model.string_or("y_column", "y");
  if (const TomlValue* cov = model.find("covariance")) {
    const std::string& name = cov->as_string(path + ": covariance");
    if (name != "identity") cfg.covariance_file = name;
  }

  if (doc.has_table("model.kernel")) {
    const TomlTable& kernel = doc.table("model.kernel");
    const std::string family = kernel.string_or("family", "squared-exponential");
    const double ell = kernel.number_or("lengthscale", 1.0);
    const double nugget = kernel.number_or("nugget", 0.0);
    try {
      cfg.kernel = blm::KernelSpec(kernel_family_from_name(family), ell, nugget);
    } catch (const blm::DomainError& e) {
      throw IOError(path + ": " + e.what());
    }
    if (const TomlValue* locs = kernel.find("locations")) {
      cfg.location_columns = string_list(*locs, path + ": locations");
    } else {
      cfg.location_columns = {cfg.x_column};
    }
    if (cfg.covariance_file) {
      throw IOError(path + ": covariance file and kernel block are mutually exclusive");
    }
  }

  const TomlTable& output = doc.table("output");
  if (const TomlValue* qs = output.find("quantiles")) {
    cfg.quantiles.clear();
    for (const TomlValue& q : qs->as_array(path + ": quantiles")) {
      cfg.quantiles.push_back(q.as_number(path + ": quantiles"));
    }
  }
  for (double q : cfg.quantiles) {
    if (!(q > 0.0) || !(q < 1.0)) {
      throw IOError(path + ": quantiles must lie strictly inside (0,1)");
    }
  }
  std::sort(cfg.quantiles.begin(), cfg.quantiles.end());

  const TomlTable& dlm = doc.table("dlm");
  if (const TomlValue* g = dlm.find("G")) {
    const std::string& name = g->as_string(path + ": G");
    if (name != "identity") cfg.dlm_G_file = name;
  }
  if (const TomlValue* w = dlm.find("W")) {
    if (w->is_string()) {
      cfg.dlm_W_file = w->as_string(path + ": W");
    } else {
      cfg.dlm_W_scale = w->as_number(path + ": W");
      if (cfg.dlm_W_scale < 0.0) throw IOError(path + ": W scale must be nonnegative");
    }
  }

  return cfg;
}

int RunConfig::design_width() const {
  if (polynomial) return *polynomial;
  if (!columns.empty()) return static_cast<int>(columns.size()) + (intercept ? 1 : 0);
  throw IOError(label + ": config needs either polynomial or columns in [model]");
}

MatrixXd RunConfig::build_design(const CsvTable& table) const {
  const int n = table.rows();
  if (polynomial) {
    if (*polynomial == 1) return MatrixXd::Ones(n, 1);
    const VectorXd x = table.column(x_column);
    MatrixXd X(n, *polynomial);
    for (int i = 0; i < n; ++i) {
      double power = 1.0;
      for (int j = 0; j < *polynomial; ++j) {
        X(i, j) = power;
        power *= x(i);
      }
    }
    return X;
  }
  if (!columns.empty()) {
    const int extra = intercept ? 1 : 0;
    MatrixXd X(n, columns.size() + extra);
    if (intercept) X.col(0).setOnes();
    for (size_t c = 0; c < columns.size(); ++c) {
      X.col(static_cast<int>(c) + extra) = table.column(columns[c]);
    }
    return X;
  }
  throw IOError(label + ": config needs either polynomial or columns in [model]");
}

blm::NormalGammaParams RunConfig::build_prior(int p) const {
  VectorXd mean = VectorXd::Zero(p);
  if (theta0.size() == 1) {
    mean.setConstant(theta0.front());
  } else if (!theta0.empty()) {
    if (static_cast<int>(theta0.size()) != p) {
      throw IOError(label + ": theta0 has " + std::to_string(theta0.size()) +
                    " entries but the design has " + std::to_string(p) + " columns");
    }
    for (int i = 0; i < p; ++i) mean(i) = theta0[i];
  }

  MatrixXd precision;
  if (A0_file) {
    precision = read_matrix_file(*A0_file);
    if (precision.rows() != p || precision.cols() != p) {
      throw IOError(label + ": A0 file is " + std::to_string(precision.rows()) + "x" +
                    std::to_string(precision.cols()) + " but the design has " +
                    std::to_string(p) + " columns");
    }
  } else {
    precision = A0_scale * MatrixXd::Identity(p, p);
  }

  if (lambda) {
    return blm::NormalGammaParams::with_known_lambda(std::move(mean),
                                                     blm::SpdMatrix(std::move(precision)),
                                                     *lambda);
  }
  return blm::NormalGammaParams(std::move(mean), blm::SpdMatrix(std::move(precision)), alpha0,
                                beta0);
}

MatrixXd RunConfig::build_locations(const CsvTable& table) const {
  if (!kernel) throw IOError(label + ": [model.kernel] block is required here");
  MatrixXd loc(table.rows(), location_columns.size());
  for (size_t c = 0; c < location_columns.size(); ++c) {
    loc.col(static_cast<int>(c)) = table.column(location_columns[c]);
  }
  return loc;
}

blm::ModelSpec RunConfig::build_model(MatrixXd design, const CsvTable& table) const {
  if (kernel) {
    return blm::ModelSpec(std::move(design),
                          blm::kernel_correlation(*kernel, build_locations(table)));
  }
  if (covariance_file) {
    return blm::ModelSpec(std::move(design), blm::SpdMatrix(read_matrix_file(*covariance_file)));
  }
  return blm::ModelSpec::independent(std::move(design));
}

std::vector<double> parse_quantiles(const std::string& spec) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= spec.size()) {
    const size_t comma = spec.find(',', start);
    const std::string token =
        spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) {
      double q = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), q);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw IOError("malformed quantile '" + token + "'");
      }
      if (!(q > 0.0) || !(q < 1.0)) {
        throw IOError("quantiles must lie strictly inside (0,1)");
      }
      out.push_back(q);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw IOError("empty quantile list");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace blmcli
