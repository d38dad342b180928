#pragma once

#include <optional>
#include <string>
#include <vector>

namespace biphoton::cli {

// One field per flag/config key; std::nullopt means "not given", so a config
// file and the command line can be merged with flags winning per field.
struct RunConfig {
  std::optional<std::string> crystal;
  std::optional<std::string> sellmeier;
  std::optional<double> A, B, L, lambda0;
  std::optional<double> tau, eta;
  std::optional<double> s_exp;
  std::optional<std::size_t> grid;
  std::optional<double> extent_mult;
  std::optional<bool> numeric;
  std::optional<std::vector<std::size_t>> modes;
  std::optional<std::vector<std::string>> formats;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> ladder_count;
  // sweep range
  std::optional<double> eta_min, eta_max, tau_min, tau_max;
  std::optional<std::size_t> steps;
  // map extras
  std::optional<bool> heatmap;
};

RunConfig load_config_file(const std::string& path);
// Fields set in `over` replace fields of `base`.
RunConfig merge(const RunConfig& base, const RunConfig& over);

int cmd_analyze(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_modes(const RunConfig& cfg);
int cmd_map(const RunConfig& cfg);

}  // namespace biphoton::cli
