// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "chanforecast/experiment.hpp"

namespace chanforecast::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value configuration with [section] headers and '#' comments.
// Channel and model hyperparameters keep their symbol names (f, N_l, N_r,
// K, N_z, N_w, N_s, ...) as keys.
struct ExperimentConfig {
  chan::ScenarioConfig channel;   // includes T (snapshots) and speeds
  int n_traj = 8;
  int k = 15;
  std::vector<int> horizons = {1};
  double split_ratio = 0.875;

  pred::ModelKind kind = pred::ModelKind::LPCNET;
  pred::LpcnetConfig model;
  std::optional<bool> residual_flag;  // explicit residual token, when given

  std::uint64_t seed = 1;
  bool deterministic = false;
  std::string out_dir = "out";
  int dtype = 1;  // 1 = f64, 2 = f32
  double noise_var = 1.0;

  // Residual default: on whenever the difference preprocessor or the
  // adjuster is on; an explicit residual/no-residual token wins.
  void resolve_flags();
  void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Applies a comma-separated flag list: diff, adjuster, residual and their
// no- prefixed forms.
void apply_flag_tokens(ExperimentConfig& cfg, const std::string& tokens);

// Canonical key = value echo of the configuration (used in manifests).
std::string config_echo(const ExperimentConfig& cfg);

}  // namespace chanforecast::cli
