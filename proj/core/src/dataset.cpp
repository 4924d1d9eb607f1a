// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace chanforecast::chan {

CVec Window::past(int i) const {
  if (i < 0 || i >= k) throw std::out_of_range("Window::past: index out of range");
  return traj->snapshots.row(start + i).transpose();
}

CVec Window::target() const {
  return traj->snapshots.row(target_index()).transpose();
}

int Dataset::horizon_slot(int delta) const {
  for (std::size_t i = 0; i < horizons.size(); ++i)
    if (horizons[i] == delta) return static_cast<int>(i);
  return -1;
}

const std::vector<WindowRef>& Dataset::windows(int delta, bool train) const {
  const int slot = horizon_slot(delta);
  if (slot < 0) throw std::invalid_argument("Dataset: horizon not built");
  return train ? train_windows[static_cast<std::size_t>(slot)]
               : test_windows[static_cast<std::size_t>(slot)];
}

Window Dataset::make_window(const WindowRef& ref, int delta) const {
  Window w;
  w.traj = &trajectories[ref.traj];
  w.start = static_cast<int>(ref.start);
  w.k = k;
  w.delta = delta;
  return w;
}

int Dataset::snapshots_per_trajectory() const {
  return trajectories.empty() ? 0 : static_cast<int>(trajectories[0].snapshots.rows());
}

int Dataset::windows_per_trajectory(int delta) const {
  return snapshots_per_trajectory() - k - delta + 1;
}

namespace {

void index_windows(Dataset& ds) {
  const int t_total = ds.snapshots_per_trajectory();
  for (int delta : ds.horizons) {
    if (delta < 1) throw std::invalid_argument("build_dataset: horizon must be >= 1");
    if (t_total < ds.k + delta)
      throw std::invalid_argument("build_dataset: T too short for (K, delta)");
  }
  if (ds.k < 2) throw std::invalid_argument("build_dataset: K must be >= 2");

  const auto n_traj = static_cast<std::uint32_t>(ds.trajectories.size());
  const auto n_train = static_cast<std::uint32_t>(std::clamp<long>(
      std::lround(ds.split_ratio * n_traj), 1, static_cast<long>(n_traj) - 1));
  ds.train_trajs.clear();
  ds.test_trajs.clear();
  for (std::uint32_t i = 0; i < n_traj; ++i)
    (i < n_train ? ds.train_trajs : ds.test_trajs).push_back(i);

  ds.train_windows.assign(ds.horizons.size(), {});
  ds.test_windows.assign(ds.horizons.size(), {});
  for (std::size_t slot = 0; slot < ds.horizons.size(); ++slot) {
    const int n_win = t_total - ds.k - ds.horizons[slot] + 1;
    for (std::uint32_t tr = 0; tr < n_traj; ++tr) {
      auto& bucket = tr < n_train ? ds.train_windows[slot] : ds.test_windows[slot];
      for (int s = 0; s < n_win; ++s)
        bucket.push_back({tr, static_cast<std::uint32_t>(s)});
    }
  }
}

}  // namespace

Dataset build_dataset(const ScenarioConfig& cfg, int n_traj, int k,
                      const std::vector<int>& horizons, double split_ratio,
                      const Rng& rng, int n_threads) {
  cfg.validate();
  if (n_traj < 2)
    throw std::invalid_argument("build_dataset: need n_traj >= 2 to split");
  if (horizons.empty())
    throw std::invalid_argument("build_dataset: need at least one horizon");
  if (!(split_ratio > 0.0 && split_ratio < 1.0))
    throw std::invalid_argument("build_dataset: split_ratio must be in (0, 1)");

  Dataset ds;
  ds.scenario = cfg;
  ds.k = k;
  ds.horizons = horizons;
  ds.split_ratio = split_ratio;
  ds.trajectories.resize(static_cast<std::size_t>(n_traj));

  const bool mixed = cfg.speed_mps_max > cfg.speed_mps;
  auto speed_of = [&](int i) {
    if (!mixed || n_traj < 2) return cfg.speed_mps;
    return cfg.speed_mps +
           (cfg.speed_mps_max - cfg.speed_mps) * i / (n_traj - 1.0);
  };

  auto work = [&](int i) {
    ScenarioConfig traj_cfg = cfg;
    traj_cfg.speed_mps = speed_of(i);
    Rng traj_rng = rng.spawn(static_cast<std::uint64_t>(i));
    ds.trajectories[static_cast<std::size_t>(i)] =
        generate_trajectory(traj_cfg, traj_rng, static_cast<std::uint64_t>(i));
  };

  if (n_threads <= 1) {
    for (int i = 0; i < n_traj; ++i) work(i);
  } else {
    // Trajectory i depends only on rng.spawn(i): parallel == serial.
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min(n_threads, n_traj);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_traj; i = next.fetch_add(1)) work(i);
      });
    for (auto& t : pool) t.join();
  }

  index_windows(ds);
  return ds;
}

// ---------------------------------------------------------------------------
// CHPD file I/O
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'C', 'H', 'P', 'D'};

void write_u32(std::ostream& os, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, 8);
}

void write_f64(std::ostream& os, double d) {
  write_u64(os, std::bit_cast<std::uint64_t>(d));
}

void write_f32(std::ostream& os, float f) {
  write_u32(os, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t read_u32(std::istream& is) {
  char buf[4];
  if (!is.read(buf, 4)) throw std::runtime_error("dataset: truncated file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(buf[i])) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& is) {
  char buf[8];
  if (!is.read(buf, 8)) throw std::runtime_error("dataset: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf[i])) << (8 * i);
  return v;
}

double read_sample(std::istream& is, int dtype) {
  if (dtype == 1) return std::bit_cast<double>(read_u64(is));
  return static_cast<double>(std::bit_cast<float>(read_u32(is)));
}

std::uint64_t pack_metadata(double speed_mps, std::uint8_t scen_id,
                            std::uint64_t seed_index) {
  const auto mm_s = static_cast<std::uint64_t>(
      std::llround(std::max(0.0, speed_mps) * 1000.0)) & 0xFFFFFFFFull;
  return mm_s | (static_cast<std::uint64_t>(scen_id) << 32) |
         ((seed_index & 0xFFFFFFull) << 40);
}

}  // namespace

void save_dataset(const std::filesystem::path& path, const Dataset& ds, int dtype) {
  if (dtype != 1 && dtype != 2)
    throw std::invalid_argument("save_dataset: dtype must be 1 (f64) or 2 (f32)");
  if (ds.trajectories.empty())
    throw std::invalid_argument("save_dataset: empty dataset");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_dataset: cannot open " + path.string());

  const auto n_b = static_cast<std::uint32_t>(ds.trajectories[0].snapshots.cols());
  const auto t_total = static_cast<std::uint32_t>(ds.trajectories[0].snapshots.rows());
  for (const auto& tr : ds.trajectories)
    if (tr.snapshots.rows() != t_total || tr.snapshots.cols() != n_b)
      throw std::invalid_argument("save_dataset: inconsistent trajectory shapes");

  os.write(kMagic, 4);
  write_u32(os, kDatasetVersion);
  write_u32(os, n_b);
  write_u32(os, t_total);
  write_u32(os, static_cast<std::uint32_t>(ds.trajectories.size()));
  os.put(static_cast<char>(dtype));

  for (const auto& tr : ds.trajectories)
    write_u64(os, pack_metadata(tr.speed_mps, scenario_id(tr.cfg.name), tr.seed_index));

  for (const auto& tr : ds.trajectories)
    for (std::uint32_t t = 0; t < t_total; ++t)
      for (std::uint32_t b = 0; b < n_b; ++b) {
        const cxd v = tr.snapshots(t, b);
        if (dtype == 1) {
          write_f64(os, v.real());
          write_f64(os, v.imag());
        } else {
          write_f32(os, static_cast<float>(v.real()));
          write_f32(os, static_cast<float>(v.imag()));
        }
      }
  if (!os) throw std::runtime_error("save_dataset: write failure");
}

Dataset load_dataset(const std::filesystem::path& path, int k,
                     const std::vector<int>& horizons, double split_ratio) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_dataset: cannot open " + path.string());

  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("load_dataset: bad magic");
  const std::uint32_t version = read_u32(is);
  if (version != kDatasetVersion)
    throw std::runtime_error("load_dataset: unsupported version");
  const std::uint32_t n_b = read_u32(is);
  const std::uint32_t t_total = read_u32(is);
  const std::uint32_t n_traj = read_u32(is);
  char dtype_c;
  if (!is.get(dtype_c)) throw std::runtime_error("load_dataset: truncated file");
  const int dtype = dtype_c;
  if (dtype != 1 && dtype != 2) throw std::runtime_error("load_dataset: bad dtype");
  if (n_b == 0 || t_total == 0 || n_traj == 0)
    throw std::runtime_error("load_dataset: empty dimensions");

  Dataset ds;
  ds.k = k;
  ds.horizons = horizons;
  ds.split_ratio = split_ratio;
  ds.trajectories.resize(n_traj);

  std::vector<std::uint64_t> meta(n_traj);
  for (auto& m : meta) m = read_u64(is);

  for (std::uint32_t i = 0; i < n_traj; ++i) {
    Trajectory& tr = ds.trajectories[i];
    const std::uint64_t m = meta[i];
    tr.speed_mps = static_cast<double>(m & 0xFFFFFFFFull) / 1000.0;
    tr.seed_index = (m >> 40) & 0xFFFFFFull;
    tr.cfg.name = scenario_name(static_cast<std::uint8_t>((m >> 32) & 0xFF));
    tr.cfg.n_paths = 1;  // geometry is not stored in the file
    tr.cfg.n_col = static_cast<int>(n_b) / 2;
    tr.cfg.n_row = 1;
    tr.cfg.speed_mps = tr.speed_mps;
    tr.snapshots = CMat(t_total, n_b);
    for (std::uint32_t t = 0; t < t_total; ++t)
      for (std::uint32_t b = 0; b < n_b; ++b) {
        const double re = read_sample(is, dtype);
        const double im = read_sample(is, dtype);
        tr.snapshots(t, b) = cxd(re, im);
      }
  }
  ds.scenario = ds.trajectories[0].cfg;

  index_windows(ds);
  return ds;
}

}  // namespace chanforecast::chan
