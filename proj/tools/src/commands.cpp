#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "blm/blm.hpp"
#include "io_errors.hpp"
#include "json.hpp"
#include "rng.hpp"
#include "run_config.hpp"
#include "tabular.hpp"

namespace blmcli {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";
// Dispersions below this are reported as point masses (zero scale).
constexpr double kPointMassFloor = 1e-15;

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw IOError("cannot open output file '" + out_path + "'");
  }
  out << text;
}

std::string meta_header(const std::string& command, std::uint64_t seed) {
  std::ostringstream head;
  head << "# blm " << command << "\n";
  head << "# prng: " << NormalSampler::algorithm() << "\n";
  head << "# seed: " << seed << "\n";
  return head.str();
}

json meta_json(const std::string& command, std::uint64_t seed) {
  json meta;
  meta["tool"] = "blm";
  meta["version"] = kToolVersion;
  meta["command"] = command;
  meta["prng"] = NormalSampler::algorithm();
  meta["seed"] = seed;
  return meta;
}

json vector_json(const VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const MatrixXd& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

VectorXd vector_from_json(const json& j) {
  VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
  return v;
}

MatrixXd matrix_from_json(const json& j) {
  const size_t rows = j.size();
  const size_t cols = rows == 0 ? 0 : j[0].size();
  MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t k = 0; k < cols; ++k) m(static_cast<int>(i), static_cast<int>(k)) = j[i][k].get<double>();
  }
  return m;
}

/// One output row of a predictive table. dof is empty for the known-lambda
/// (normal) case and prints as inf.
struct QuantileRow {
  double mean;
  std::optional<double> dof;
  double scale;
  std::vector<double> values;
  bool point_mass;
};

QuantileRow quantile_row(double mean, std::optional<double> dof, double dispersion,
                         const std::vector<double>& ps) {
  QuantileRow row;
  row.mean = mean;
  row.dof = dof;
  if (dispersion < kPointMassFloor) {
    row.scale = 0.0;
    row.point_mass = true;
    row.values.assign(ps.size(), mean);
    return row;
  }
  row.scale = std::sqrt(dispersion);
  row.point_mass = false;
  for (double p : ps) {
    const double unit = dof ? blm::t_quantile(*dof, p) : blm::normal_quantile(p);
    row.values.push_back(mean + row.scale * unit);
  }
  return row;
}

void append_quantile_header(std::ostringstream& out, const std::vector<double>& ps) {
  out << "mean,dof,scale";
  for (double p : ps) out << ",q" << format_double(p);
  out << ",point_mass\n";
}

void append_quantile_row(std::ostringstream& out, const QuantileRow& row) {
  out << format_double(row.mean) << ",";
  out << (row.dof ? format_double(*row.dof) : std::string("inf"));
  out << "," << format_double(row.scale);
  for (double v : row.values) out << "," << format_double(v);
  out << "," << (row.point_mass ? 1 : 0) << "\n";
}

std::vector<double> effective_quantiles(const RunConfig& cfg, const CommonArgs& common) {
  return common.quantiles ? *common.quantiles : cfg.quantiles;
}

struct FittedModel {
  RunConfig cfg;
  blm::PosteriorSummary post;
  int n;
};

FittedModel fit_from_files(const std::string& data_path, const std::string& config_path) {
  RunConfig cfg = RunConfig::load(config_path);
  const CsvTable table = read_csv(data_path);
  MatrixXd design = cfg.kernel ? MatrixXd() : cfg.build_design(table);
  const VectorXd y = table.column(cfg.y_column);
  if (cfg.kernel) {
    const blm::GpDataset data(cfg.build_locations(table), y);
    blm::PosteriorSummary post =
        blm::gp_fit(data, *cfg.kernel, cfg.build_prior(static_cast<int>(data.design().cols())));
    return FittedModel{std::move(cfg), std::move(post), table.rows()};
  }
  const blm::NormalGammaParams prior = cfg.build_prior(static_cast<int>(design.cols()));
  const blm::ModelSpec model = cfg.build_model(std::move(design), table);
  blm::PosteriorSummary post = blm::posterior_update(prior, model, y);
  return FittedModel{std::move(cfg), std::move(post), table.rows()};
}

json marginals_json(const blm::PosteriorSummary& post, const std::vector<double>& ps) {
  const int p = static_cast<int>(post.posterior.theta.size());
  json out = json::array();
  for (int j = 0; j < p; ++j) {
    MatrixXd ej = MatrixXd::Zero(1, p);
    ej(0, j) = 1.0;
    json entry;
    entry["coefficient"] = j;
    QuantileRow row;
    if (post.posterior.lambda_known) {
      const blm::PredictiveNormal marg =
          blm::marginal_linear_known_lambda(post, ej, *post.posterior.lambda_known);
      row = quantile_row(marg.mean(0), std::nullopt, marg.covariance(0, 0), ps);
    } else {
      const blm::PredictiveT marg = blm::marginal_linear(post, ej);
      row = quantile_row(marg.mean(0), marg.dof, marg.dispersion(0, 0), ps);
    }
    entry["center"] = row.mean;
    entry["scale"] = row.scale;
    if (row.dof) {
      entry["dof"] = *row.dof;
    } else {
      entry["dof"] = nullptr;
    }
    json quantiles = json::array();
    for (size_t k = 0; k < ps.size(); ++k) {
      json q;
      q["p"] = ps[k];
      q["value"] = row.values[k];
      quantiles.push_back(std::move(q));
    }
    entry["quantiles"] = std::move(quantiles);
    out.push_back(std::move(entry));
  }
  return out;
}

/// Rebuilds a posterior summary from a fit report. Only what independent
/// prediction needs: the whitened response stays empty.
blm::PosteriorSummary posterior_from_report(const json& report) {
  const json& post = report.at("posterior");
  const VectorXd theta = vector_from_json(post.at("theta_n"));
  blm::SpdMatrix precision{matrix_from_json(post.at("A_n"))};
  const json& prior = report.at("prior");

  blm::NormalGammaParams params =
      prior.at("lambda").is_null()
          ? blm::NormalGammaParams(theta, precision, post.at("alpha_n").get<double>(),
                                   post.at("beta_n").get<double>())
          : blm::NormalGammaParams::with_known_lambda(theta, precision,
                                                      prior.at("lambda").get<double>());
  blm::LowerTriangular chol = blm::cholesky(precision);
  blm::SpdMatrix inv = blm::spd_inverse_from_chol(chol);
  return blm::PosteriorSummary{std::move(params),
                               post.at("s2_n").get<double>(),
                               post.at("d2_n").get<double>(),
                               std::move(chol),
                               std::move(inv),
                               report.at("log_evidence").get<double>(),
                               VectorXd::Zero(0)};
}

std::vector<std::string> echo_columns(const RunConfig& cfg) {
  if (cfg.kernel) return cfg.location_columns;
  if (cfg.polynomial) return {cfg.x_column};
  return cfg.columns;
}

}  // namespace

void cmd_simulate(int n, double sigma, const CommonArgs& common) {
  if (n < 1) throw IOError("simulate: n must be at least 1");
  if (sigma < 0.0) throw IOError("simulate: sigma must be nonnegative");

  NormalSampler normal(common.seed);
  std::ostringstream out;
  out << meta_header("simulate", common.seed);
  out << "x,y\n";
  for (int i = 1; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double y = 1.0 + std::sin(2.0 * std::numbers::pi * x) + sigma * normal();
    out << format_double(x) << "," << format_double(y) << "\n";
  }
  write_text(common.out, out.str());
}

void cmd_fit(const std::string& data_path, const std::string& config_path,
             const CommonArgs& common) {
  const FittedModel fitted = fit_from_files(data_path, config_path);
  const blm::PosteriorSummary& post = fitted.post;
  const std::vector<double> ps = effective_quantiles(fitted.cfg, common);

  json report;
  report["meta"] = meta_json("fit", common.seed);
  report["label"] = fitted.cfg.label;
  report["n"] = fitted.n;
  report["p"] = static_cast<int>(post.posterior.theta.size());

  json prior;
  prior["alpha0"] = fitted.cfg.alpha0;
  prior["beta0"] = fitted.cfg.beta0;
  if (fitted.cfg.lambda) {
    prior["lambda"] = *fitted.cfg.lambda;
  } else {
    prior["lambda"] = nullptr;
  }
  report["prior"] = std::move(prior);

  json posterior;
  posterior["theta_n"] = vector_json(post.posterior.theta);
  posterior["A_n"] = matrix_json(post.posterior.precision.matrix());
  posterior["alpha_n"] = post.posterior.shape;
  posterior["beta_n"] = post.posterior.rate;
  posterior["s2_n"] = post.s2_n;
  posterior["d2_n"] = post.d2_n;
  report["posterior"] = std::move(posterior);

  report["log_evidence"] = post.log_evidence;
  report["marginals"] = marginals_json(post, ps);

  write_text(common.out, report.dump(2) + "\n");
}

void cmd_evidence(const std::string& data_path, const std::vector<std::string>& config_paths,
                  const CommonArgs& common) {
  if (config_paths.empty()) {
    throw IOError("evidence: need at least one --config");
  }
  const CsvTable table = read_csv(data_path);

  std::vector<blm::ModelCandidate> candidates;
  std::string y_column;
  for (const std::string& path : config_paths) {
    RunConfig cfg = RunConfig::load(path);
    if (y_column.empty()) {
      y_column = cfg.y_column;
    } else if (cfg.y_column != y_column) {
      throw IOError("evidence: candidate configs disagree on the response column ('" + y_column +
                    "' vs '" + cfg.y_column + "')");
    }
    MatrixXd design = cfg.kernel ? blm::GpDataset(cfg.build_locations(table),
                                                  table.column(cfg.y_column))
                                       .design()
                                 : cfg.build_design(table);
    blm::NormalGammaParams prior = cfg.build_prior(static_cast<int>(design.cols()));
    blm::ModelSpec model = cfg.build_model(std::move(design), table);
    candidates.push_back(
        blm::ModelCandidate{cfg.label, std::move(prior), std::move(model)});
  }

  const VectorXd y = table.column(y_column);
  const std::vector<blm::ModelEvidence> evidences = blm::evaluate_models(candidates, y);
  std::vector<double> logs;
  for (const auto& e : evidences) logs.push_back(e.log_f_y);
  const VectorXd probs = blm::model_posterior_probs(logs);

  std::ostringstream out;
  out << meta_header("evidence", common.seed);
  out << "label log_evidence log_evidence_reduced probability\n";
  for (size_t i = 0; i < evidences.size(); ++i) {
    out << evidences[i].label << " " << format_double(evidences[i].log_f_y) << " "
        << format_double(evidences[i].log_z) << " " << format_double(probs(static_cast<int>(i)))
        << "\n";
  }
  write_text(common.out, out.str());
}

void cmd_predict(const std::optional<std::string>& data_path,
                 const std::optional<std::string>& fit_path, const std::string& config_path,
                 const std::string& targets_path, const CommonArgs& common) {
  if (data_path.has_value() == fit_path.has_value()) {
    throw IOError("predict: pass exactly one of --data (refit) or --fit (reuse a report)");
  }

  RunConfig cfg = RunConfig::load(config_path);
  blm::PosteriorSummary post = [&] {
    if (data_path) {
      return fit_from_files(*data_path, config_path).post;
    }
    std::ifstream in(*fit_path);
    if (!in) throw IOError("cannot open fit report '" + *fit_path + "'");
    json report;
    try {
      report = json::parse(in);
    } catch (const json::parse_error& e) {
      throw IOError("malformed fit report '" + *fit_path + "': " + e.what());
    }
    return posterior_from_report(report);
  }();

  const CsvTable targets = read_csv(targets_path);
  const MatrixXd design = cfg.build_design(targets);
  if (design.cols() != post.posterior.theta.size()) {
    throw IOError("predict: targets produce " + std::to_string(design.cols()) +
                  " design columns but the posterior has " +
                  std::to_string(post.posterior.theta.size()));
  }
  const std::vector<double> ps = effective_quantiles(cfg, common);
  const std::vector<std::string> echo = echo_columns(cfg);

  std::ostringstream out;
  out << meta_header("predict", common.seed);
  for (const std::string& col : echo) out << col << ",";
  append_quantile_header(out, ps);

  for (int i = 0; i < design.rows(); ++i) {
    const blm::PredictionTarget tgt =
        blm::PredictionTarget::independent(MatrixXd(design.row(i)));
    QuantileRow row;
    if (post.posterior.lambda_known) {
      const blm::PredictiveNormal pred =
          blm::predict_known_lambda(post, tgt, *post.posterior.lambda_known);
      row = quantile_row(pred.mean(0), std::nullopt, pred.covariance(0, 0), ps);
    } else {
      const blm::PredictiveT pred = blm::predict_t(post, tgt);
      row = quantile_row(pred.mean(0), pred.dof, pred.dispersion(0, 0), ps);
    }
    for (const std::string& col : echo) {
      out << format_double(targets.values(i, targets.column_index(col))) << ",";
    }
    append_quantile_row(out, row);
  }
  write_text(common.out, out.str());
}

void cmd_gp(const std::string& data_path, const std::string& config_path,
            const std::string& targets_path, const CommonArgs& common) {
  RunConfig cfg = RunConfig::load(config_path);
  if (!cfg.kernel) {
    throw IOError("gp: config needs a [model.kernel] block");
  }
  const CsvTable table = read_csv(data_path);
  const blm::GpDataset data(cfg.build_locations(table), table.column(cfg.y_column));
  const blm::NormalGammaParams prior =
      cfg.build_prior(static_cast<int>(data.design().cols()));
  const blm::PosteriorSummary fit = blm::gp_fit(data, *cfg.kernel, prior);

  const CsvTable targets = read_csv(targets_path);
  const MatrixXd grid = cfg.build_locations(targets);
  const std::vector<double> ps = effective_quantiles(cfg, common);

  std::ostringstream out;
  out << meta_header("gp", common.seed);
  for (const std::string& col : cfg.location_columns) out << col << ",";
  append_quantile_header(out, ps);

  if (cfg.lambda) {
    const auto preds = blm::gp_predict_known_lambda(fit, data, *cfg.kernel, grid, *cfg.lambda);
    for (size_t i = 0; i < preds.size(); ++i) {
      for (int c = 0; c < grid.cols(); ++c) out << format_double(grid(i, c)) << ",";
      append_quantile_row(
          out, quantile_row(preds[i].mean(0), std::nullopt, preds[i].covariance(0, 0), ps));
    }
  } else {
    const auto preds = blm::gp_predict(fit, data, *cfg.kernel, grid);
    for (size_t i = 0; i < preds.size(); ++i) {
      for (int c = 0; c < grid.cols(); ++c) out << format_double(grid(i, c)) << ",";
      append_quantile_row(
          out, quantile_row(preds[i].mean(0), preds[i].dof, preds[i].dispersion(0, 0), ps));
    }
  }
  write_text(common.out, out.str());
}

void cmd_dlm(const std::string& data_path, const std::string& config_path,
             const CommonArgs& common) {
  RunConfig cfg = RunConfig::load(config_path);
  if (cfg.lambda) {
    throw IOError("dlm: filtering needs the gamma prior on the precision; remove the fixed "
                  "lambda from [prior]");
  }
  const CsvTable table = read_csv(data_path);
  const VectorXd y = table.column(cfg.y_column);
  const MatrixXd design = cfg.build_design(table);
  const int p = static_cast<int>(design.cols());

  const MatrixXd G = cfg.dlm_G_file ? read_matrix_file(*cfg.dlm_G_file)
                                    : MatrixXd(MatrixXd::Identity(p, p));
  const MatrixXd W = cfg.dlm_W_file ? read_matrix_file(*cfg.dlm_W_file)
                                    : MatrixXd(cfg.dlm_W_scale * MatrixXd::Identity(p, p));
  if (G.rows() != p || G.cols() != p || W.rows() != p || W.cols() != p) {
    throw IOError("dlm: G and W must be " + std::to_string(p) + "x" + std::to_string(p));
  }

  const blm::NormalGammaParams prior = cfg.build_prior(p);
  const blm::DlmState start(0, prior.theta, prior.precision, prior.shape, prior.rate);
  const blm::DlmSpec spec{
      [&G](int) { return G; }, [&W](int) { return W; },
      [&design](int t) { return Eigen::RowVectorXd(design.row(t - 1)); }};
  const std::vector<blm::DlmStepRecord> records = blm::dlm_filter(spec, start, y);

  const std::vector<double> ps = effective_quantiles(cfg, common);
  std::ostringstream out;
  out << meta_header("dlm", common.seed);
  out << "step,y,forecast_mean,forecast_dof,forecast_scale";
  for (double q : ps) out << ",forecast_q" << format_double(q);
  out << ",forecast_point_mass";
  for (int j = 1; j <= p; ++j) out << ",state_" << j;
  out << "\n";

  for (size_t t = 0; t < records.size(); ++t) {
    const auto& rec = records[t];
    const QuantileRow row =
        quantile_row(rec.forecast.mean(0), rec.forecast.dof, rec.forecast.dispersion(0, 0), ps);
    out << (t + 1) << "," << format_double(y(static_cast<int>(t)));
    out << "," << format_double(row.mean) << "," << format_double(*row.dof) << ","
        << format_double(row.scale);
    for (double v : row.values) out << "," << format_double(v);
    out << "," << (row.point_mass ? 1 : 0);
    for (int j = 0; j < p; ++j) out << "," << format_double(rec.filtered.mean(j));
    out << "\n";
  }
  write_text(common.out, out.str());
}

}  // namespace blmcli
