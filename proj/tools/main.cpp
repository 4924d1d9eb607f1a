// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace chanforecast::cli {

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool deterministic = false;
  std::optional<std::string> dtype;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed, "base seed (overrides config)");
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_flag("--deterministic", args.deterministic,
                "single worker, byte-reproducible outputs");
  cmd->add_option("--dtype", args.dtype, "sample precision: f64 | f32")
      ->check(CLI::IsMember({"f64", "f32"}));
}

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig cfg = parse_config_file(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.out_dir) cfg.out_dir = *args.out_dir;
  if (args.deterministic) cfg.deterministic = true;
  if (args.dtype) cfg.dtype = *args.dtype == "f64" ? 1 : 2;
  return cfg;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"time-varying MIMO channel prediction workbench"};
  app.require_subcommand(1);

  CommonArgs gen_args;
  auto* gen = app.add_subcommand("generate", "synthesize a channel dataset");
  add_common(gen, gen_args);

  CommonArgs adf_args;
  AdfOptions adf_opts;
  std::string adf_dataset;
  auto* adf = app.add_subcommand("adf", "sliding-segment stationarity profile");
  add_common(adf, adf_args);
  adf->add_option("--dataset", adf_dataset, "dataset file")->required();
  adf->add_option("--lags", adf_opts.lags, "lagged differences in the regression");
  adf->add_option("--segment-len", adf_opts.segment_len, "segment length in snapshots");
  adf->add_option("--stride", adf_opts.stride, "segment stride in snapshots");

  CommonArgs train_args;
  std::string train_dataset;
  std::string train_flags;
  auto* train = app.add_subcommand("train", "train the configured model");
  add_common(train, train_args);
  train->add_option("--dataset", train_dataset, "dataset file")->required();
  train->add_option("--flags", train_flags,
                    "comma list: [no-]diff, [no-]adjuster, [no-]residual");

  CommonArgs eval_args;
  std::string eval_dataset;
  std::vector<std::string> eval_checkpoints;
  std::vector<int> eval_horizons;
  bool eval_train_partition = false;
  auto* eval = app.add_subcommand("evaluate", "score methods on the test partition");
  add_common(eval, eval_args);
  eval->add_option("--dataset", eval_dataset, "dataset file")->required();
  eval->add_option("--checkpoint", eval_checkpoints, "model checkpoint (repeatable)");
  eval->add_option("--horizons", eval_horizons, "horizons for the on-the-fly baselines");
  eval->add_flag("--train-partition", eval_train_partition,
                 "score the train partition instead (training-loss cross-check)");

  CommonArgs pc_args;
  auto* pc = app.add_subcommand("paramcount", "parameter total vs the closed form");
  add_common(pc, pc_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(resolve(gen_args));
    if (adf->parsed()) return cmd_adf(resolve(adf_args), adf_dataset, adf_opts);
    if (train->parsed()) {
      ExperimentConfig cfg = resolve(train_args);
      if (!train_flags.empty()) {
        apply_flag_tokens(cfg, train_flags);
        cfg.resolve_flags();
        cfg.validate();
      }
      return cmd_train(cfg, train_dataset);
    }
    if (eval->parsed()) {
      std::vector<std::filesystem::path> ckpts(eval_checkpoints.begin(),
                                               eval_checkpoints.end());
      return cmd_evaluate(resolve(eval_args), eval_dataset, ckpts, eval_horizons,
                          eval_train_partition);
    }
    if (pc->parsed()) return cmd_paramcount(resolve(pc_args));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}

}  // namespace chanforecast::cli

int main(int argc, char** argv) { return chanforecast::cli::run_cli(argc, argv); }
