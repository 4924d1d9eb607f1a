// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <filesystem>
#include <vector>

#include "config.hpp"

namespace chanforecast::cli {

struct AdfOptions {
  int lags = 1;
  int segment_len = 128;
  int stride = 64;
};

// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O error.
int cmd_generate(const ExperimentConfig& cfg);
int cmd_adf(const ExperimentConfig& cfg, const std::filesystem::path& dataset,
            const AdfOptions& opts);
int cmd_train(const ExperimentConfig& cfg, const std::filesystem::path& dataset);
int cmd_evaluate(const ExperimentConfig& cfg, const std::filesystem::path& dataset,
                 const std::vector<std::filesystem::path>& checkpoints,
                 const std::vector<int>& horizons, bool train_partition = false);
int cmd_paramcount(const ExperimentConfig& cfg);

int run_cli(int argc, char** argv);

}  // namespace chanforecast::cli
