// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "chanforecast/checkpoint.hpp"
#include "chanforecast/training.hpp"
#include "manifest.hpp"

namespace chanforecast::cli {

namespace fs = std::filesystem;

namespace {

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void ensure_out_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir);
}

RunManifest base_manifest(const ExperimentConfig& cfg, const std::string& command,
                          const WallClock& clock) {
  RunManifest m;
  m.command = command;
  m.seed = cfg.seed;
  m.deterministic = cfg.deterministic;
  if (!cfg.deterministic) m.wall_clock_s = clock.seconds();
  m.config_echo = config_echo(cfg);
  return m;
}

chan::Dataset load_verified_dataset(const ExperimentConfig& cfg, const fs::path& path) {
  if (!fs::exists(path)) throw IoError("dataset file not found: " + path.string());
  verify_against_manifest(path);
  return chan::load_dataset(path, cfg.k, cfg.horizons, cfg.split_ratio);
}

int worker_count(const ExperimentConfig& cfg) {
  return cfg.deterministic ? 1 : experiment::default_threads();
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

int cmd_generate(const ExperimentConfig& cfg) {
  const WallClock clock;
  ensure_out_dir(cfg);

  const Rng rng(cfg.seed);
  const chan::Dataset ds = chan::build_dataset(cfg.channel, cfg.n_traj, cfg.k,
                                               cfg.horizons, cfg.split_ratio, rng,
                                               worker_count(cfg));

  const fs::path out = fs::path(cfg.out_dir) / "dataset.chpd";
  chan::save_dataset(out, ds, cfg.dtype);

  std::printf("trajectories: %d (train %zu / test %zu)\n", cfg.n_traj,
              ds.train_trajs.size(), ds.test_trajs.size());
  std::printf("snapshots per trajectory: %d\n", ds.snapshots_per_trajectory());
  for (int h : cfg.horizons) {
    const auto n_train = ds.windows(h, true).size();
    const auto n_test = ds.windows(h, false).size();
    std::printf("windows (delta=%d): %zu  [train %zu / test %zu]\n", h,
                n_train + n_test, n_train, n_test);
  }
  std::printf("wrote: %s (%ju bytes)\n", out.string().c_str(),
              static_cast<std::uintmax_t>(fs::file_size(out)));

  RunManifest m = base_manifest(cfg, "generate", clock);
  m.outputs = {out};
  write_manifests(m);
  return 0;
}

int cmd_adf(const ExperimentConfig& cfg, const fs::path& dataset, const AdfOptions& opts) {
  const WallClock clock;
  ensure_out_dir(cfg);
  const chan::Dataset ds = load_verified_dataset(cfg, dataset);

  const fs::path out = fs::path(cfg.out_dir) / "adf_pvalues.csv";
  std::ofstream os(out, std::ios::binary);
  if (!os) throw IoError("cannot open " + out.string());
  os << "trajectory,segment_start,speed_kmh,scenario,lags,t_stat,p_value\n";

  const int t_total = ds.snapshots_per_trajectory();
  if (opts.segment_len > t_total)
    throw ConfigError("adf: segment length exceeds trajectory length");

  std::vector<double> segment(static_cast<std::size_t>(opts.segment_len));
  long rows = 0;
  for (std::size_t tr = 0; tr < ds.trajectories.size(); ++tr) {
    const auto& traj = ds.trajectories[tr];
    for (int start = 0; start + opts.segment_len <= t_total; start += opts.stride) {
      for (int t = 0; t < opts.segment_len; ++t)
        segment[static_cast<std::size_t>(t)] = traj.snapshots(start + t, 0).real();
      const analysis::AdfResult r = analysis::adf_test(segment, opts.lags);
      char line[256];
      std::snprintf(line, sizeof(line), "%zu,%d,%.2f,%s,%d,%.6f,%.6f\n", tr, start,
                    3.6 * traj.speed_mps, traj.cfg.name.c_str(), r.lags, r.t_stat,
                    r.p_value);
      os << line;
      ++rows;
    }
  }
  os.close();
  std::printf("wrote: %s (%ld rows)\n", out.string().c_str(), rows);

  RunManifest m = base_manifest(cfg, "adf", clock);
  m.inputs = {dataset};
  m.outputs = {out};
  write_manifests(m);
  return 0;
}

int cmd_train(const ExperimentConfig& cfg, const fs::path& dataset) {
  const WallClock clock;
  ensure_out_dir(cfg);

  if (cfg.kind == pred::ModelKind::SH || cfg.kind == pred::ModelKind::AR)
    throw ConfigError("train: kind '" + pred::kind_name(cfg.kind) + "' has no parameters");

  const chan::Dataset ds = load_verified_dataset(cfg, dataset);
  if (ds.horizon_slot(cfg.model.horizon) < 0)
    throw ConfigError("train: model horizon not among dataset horizons");

  const int n_b = static_cast<int>(ds.trajectories[0].snapshots.cols());
  pred::NnPredictor model(cfg.kind, n_b, cfg.model);

  Rng root(cfg.seed);
  Rng init_rng = root.spawn(0);
  Rng train_rng = root.spawn(1);
  model.init(init_rng);

  const fs::path loss_path = fs::path(cfg.out_dir) / "loss.csv";
  std::ofstream loss_os(loss_path, std::ios::binary);
  if (!loss_os) throw IoError("cannot open " + loss_path.string());
  loss_os << "epoch,train_loss\n";

  pred::TrainOptions opts;
  opts.on_epoch = [&](int epoch, double loss) {
    char line[128];
    std::snprintf(line, sizeof(line), "%d,%.12g\n", epoch, loss);
    loss_os << line;
    std::printf("epoch %d  loss %.6g\n", epoch, loss);
    std::fflush(stdout);
  };

  pred::TrainResult result;
  try {
    result = pred::train(model, ds, train_rng, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("train: ") + e.what());
  } catch (const std::exception& e) {
    throw NumericError(std::string("train: ") + e.what());
  }
  loss_os.close();

  const fs::path model_path = fs::path(cfg.out_dir) / "model.cfnm";
  pred::save_model(model_path, model);
  std::printf("final full-pass train loss: %.12g\n", result.final_full_loss);
  std::printf("wrote: %s\n", model_path.string().c_str());

  RunManifest m = base_manifest(cfg, "train", clock);
  m.inputs = {dataset};
  m.outputs = {model_path, loss_path};
  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", result.final_full_loss);
    m.extra.emplace_back("final_train_loss", buf);
  }
  write_manifests(m);
  return 0;
}

int cmd_evaluate(const ExperimentConfig& cfg, const fs::path& dataset,
                 const std::vector<fs::path>& checkpoints,
                 const std::vector<int>& horizons_filter, bool train_partition) {
  const WallClock clock;
  ensure_out_dir(cfg);
  const chan::Dataset ds = load_verified_dataset(cfg, dataset);

  const std::vector<int> horizons = horizons_filter.empty() ? cfg.horizons
                                                            : horizons_filter;
  for (int h : horizons)
    if (ds.horizon_slot(h) < 0)
      throw ConfigError("evaluate: horizon " + std::to_string(h) +
                        " not among dataset horizons");

  const int threads = worker_count(cfg);
  const bool train_part = train_partition;
  std::vector<analysis::MetricsRow> rows;

  // SH and AR run on the fly for every requested horizon.
  for (int h : horizons) {
    const auto sh = experiment::evaluate_method(ds, h, train_part, pred::ModelKind::SH,
                                                nullptr, cfg.model.ar_order, threads);
    rows.push_back(experiment::make_row(ds, h, "sh", sh, cfg.channel.srs_period_s));
    const auto ar = experiment::evaluate_method(ds, h, train_part, pred::ModelKind::AR,
                                                nullptr, cfg.model.ar_order, threads);
    rows.push_back(experiment::make_row(ds, h, "ar", ar, cfg.channel.srs_period_s));
  }

  std::vector<std::string> used_names;
  for (const auto& ckpt : checkpoints) {
    if (!fs::exists(ckpt)) throw IoError("checkpoint not found: " + ckpt.string());
    verify_against_manifest(ckpt);
    const pred::NnPredictor model = pred::load_model(ckpt);
    const int h = model.config().horizon;
    if (ds.horizon_slot(h) < 0)
      throw ConfigError("evaluate: checkpoint horizon " + std::to_string(h) +
                        " not among dataset horizons");
    std::string name = pred::kind_name(model.kind());
    int suffix = 2;
    while (std::find(used_names.begin(), used_names.end(), name) != used_names.end())
      name = pred::kind_name(model.kind()) + "#" + std::to_string(suffix++);
    used_names.push_back(name);
    const auto r = experiment::evaluate_method(ds, h, train_part, model.kind(), &model,
                                               cfg.model.ar_order, threads);
    rows.push_back(experiment::make_row(ds, h, name, r, cfg.channel.srs_period_s));
  }

  const fs::path csv_path = fs::path(cfg.out_dir) / "metrics.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw IoError("cannot open " + csv_path.string());
  csv << "scenario,speed_kmh,horizon_ms,method,nmse_db,cosine_pct,n\n";
  for (const auto& r : rows) {
    csv << r.scenario << "," << format_metric(r.speed_kmh) << ","
        << format_metric(r.horizon_ms) << "," << r.method << ","
        << format_metric(r.nmse_db) << "," << format_metric(r.cosine_pct) << "," << r.n
        << "\n";
  }
  csv.close();

  nlohmann::json j;
  j["code_version"] = kCodeVersion;
  j["seed"] = cfg.seed;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"scenario", r.scenario},
                         {"speed_kmh", r.speed_kmh},
                         {"horizon_ms", r.horizon_ms},
                         {"method", r.method},
                         {"nmse_lin", r.nmse_lin},
                         {"nmse_db", r.nmse_db},
                         {"cosine_pct", r.cosine_pct},
                         {"n", r.n}});
  }
  const fs::path json_path = fs::path(cfg.out_dir) / "metrics.json";
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw IoError("cannot open " + json_path.string());
  js << j.dump(2) << "\n";
  js.close();

  for (const auto& r : rows)
    std::printf("%-10s delta=%.0fms  nmse %8.3f dB  cosine %8.4f %%  (n=%ld)\n",
                r.method.c_str(), r.horizon_ms, r.nmse_db, r.cosine_pct, r.n);

  RunManifest m = base_manifest(cfg, "evaluate", clock);
  m.inputs = {dataset};
  for (const auto& c : checkpoints) m.inputs.push_back(c);
  m.outputs = {csv_path, json_path};
  write_manifests(m);
  return 0;
}

int cmd_paramcount(const ExperimentConfig& cfg) {
  if (cfg.kind == pred::ModelKind::SH || cfg.kind == pred::ModelKind::AR) {
    std::printf("0 / 0\n");
    return 0;
  }
  const int n_b = cfg.channel.n_antennas();
  pred::NnPredictor model(cfg.kind, n_b, cfg.model);
  const std::size_t counted = model.params().total_count();

  const auto& mc = model.config();
  std::size_t formula =
      4ull * (2ull * n_b * mc.n_z + 1ull * mc.n_z * mc.n_z + mc.n_z) +
      2ull * (mc.n_z + 1) * n_b;
  if (mc.enable_adjuster) {
    const std::size_t n_i = static_cast<std::size_t>(mc.adjuster_input());
    formula += n_i * mc.n_w + 1ull * mc.n_w * mc.n_z + mc.n_w + mc.n_z;  // weight MLP
    formula += n_i * mc.n_s + 2ull * mc.n_s + 1;                         // bias MLP
  }

  std::printf("%zu / %zu\n", counted, formula);
  if (counted != formula) {
    std::fprintf(stderr, "paramcount: store and closed form disagree\n");
    return 3;
  }
  return 0;
}

}  // namespace chanforecast::cli
