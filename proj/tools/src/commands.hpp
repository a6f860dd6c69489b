#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blmcli {

/// Options shared by every subcommand. An empty `out` writes to stdout.
/// `quantiles` overrides the config's [output] list when present.
struct CommonArgs {
  std::string out;
  std::uint64_t seed = 1;
  std::optional<std::vector<double>> quantiles;
};

void cmd_simulate(int n, double sigma, const CommonArgs& common);

void cmd_fit(const std::string& data_path, const std::string& config_path,
             const CommonArgs& common);

void cmd_evidence(const std::string& data_path, const std::vector<std::string>& config_paths,
                  const CommonArgs& common);

/// Predicts at independent new design points, either refitting from data or
/// reusing a fit report (--fit JSON).
void cmd_predict(const std::optional<std::string>& data_path,
                 const std::optional<std::string>& fit_path, const std::string& config_path,
                 const std::string& targets_path, const CommonArgs& common);

void cmd_gp(const std::string& data_path, const std::string& config_path,
            const std::string& targets_path, const CommonArgs& common);

void cmd_dlm(const std::string& data_path, const std::string& config_path,
             const CommonArgs& common);

}  // namespace blmcli
