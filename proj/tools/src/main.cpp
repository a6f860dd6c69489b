#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blm/errors.hpp"
#include "commands.hpp"
#include "io_errors.hpp"
#include "run_config.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Cli {
  std::string data;
  std::vector<std::string> configs;
  std::string targets;
  std::string fit_report;
  std::string quantile_spec;
  blmcli::CommonArgs common;
  int sim_n = 40;
  double sim_sigma = 0.1;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugate Bayesian linear models: fitting, model evidence, prediction, "
               "Gaussian-process interpolation and dynamic linear model filtering"};
  app.require_subcommand(1);
  app.fallthrough(true);
  app.failure_message(CLI::FailureMessage::help);

  Cli cli;
  app.add_option("--seed", cli.common.seed, "PRNG seed, recorded in every output header")
      ->capture_default_str();
  app.add_option("--out", cli.common.out, "Output file (stdout when omitted)");
  app.add_option("--quantiles", cli.quantile_spec,
                 "Comma-separated quantile levels, e.g. 0.05,0.5,0.95");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Write a CSV of n noisy samples of 1 + sin(2 pi x) on x = i/n");
  simulate->add_option("--n", cli.sim_n, "Number of samples")->capture_default_str();
  simulate->add_option("--sigma", cli.sim_sigma, "Noise standard deviation")
      ->capture_default_str();

  CLI::App* fit = app.add_subcommand("fit", "Posterior update; writes a JSON report");
  fit->add_option("--data", cli.data, "Input CSV")->required();
  fit->add_option("--config", cli.configs, "Run config (TOML)")->required()->expected(1);

  CLI::App* evidence = app.add_subcommand(
      "evidence", "Log evidence and posterior probability per candidate model");
  evidence->add_option("--data", cli.data, "Input CSV")->required();
  evidence->add_option("--config", cli.configs, "One config per candidate (repeatable)")
      ->required();

  CLI::App* predict =
      app.add_subcommand("predict", "Predictive distribution at new design points");
  predict->add_option("--data", cli.data, "Input CSV (refits before predicting)");
  predict->add_option("--fit", cli.fit_report, "Fit report JSON to reuse instead of --data");
  predict->add_option("--config", cli.configs, "Run config (TOML)")->required()->expected(1);
  predict->add_option("--targets", cli.targets, "CSV of points to predict at")->required();

  CLI::App* gp = app.add_subcommand(
      "gp", "Gaussian-process prediction along a grid (kernel covariance from the config)");
  gp->add_option("--data", cli.data, "Input CSV")->required();
  gp->add_option("--config", cli.configs, "Run config with a [model.kernel] block")
      ->required()
      ->expected(1);
  gp->add_option("--targets", cli.targets, "CSV of grid locations")->required();

  CLI::App* dlm = app.add_subcommand(
      "dlm", "Dynamic linear model filtering: per-step forecast and filtered state");
  dlm->add_option("--data", cli.data, "Input CSV, rows in time order")->required();
  dlm->add_option("--config", cli.configs, "Run config (TOML)")->required()->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (!cli.quantile_spec.empty()) {
      cli.common.quantiles = blmcli::parse_quantiles(cli.quantile_spec);
    }
    if (simulate->parsed()) {
      blmcli::cmd_simulate(cli.sim_n, cli.sim_sigma, cli.common);
    } else if (fit->parsed()) {
      blmcli::cmd_fit(cli.data, cli.configs.front(), cli.common);
    } else if (evidence->parsed()) {
      blmcli::cmd_evidence(cli.data, cli.configs, cli.common);
    } else if (predict->parsed()) {
      std::optional<std::string> data_opt, fit_opt;
      if (!cli.data.empty()) data_opt = cli.data;
      if (!cli.fit_report.empty()) fit_opt = cli.fit_report;
      blmcli::cmd_predict(data_opt, fit_opt, cli.configs.front(), cli.targets, cli.common);
    } else if (gp->parsed()) {
      blmcli::cmd_gp(cli.data, cli.configs.front(), cli.targets, cli.common);
    } else if (dlm->parsed()) {
      blmcli::cmd_dlm(cli.data, cli.configs.front(), cli.common);
    }
  } catch (const blm::NotPositiveDefinite& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const blmcli::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const blmcli::IOError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const blm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
