// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <filesystem>
#include <vector>

#include "chanforecast/channel.hpp"

namespace chanforecast::chan {

// One training/evaluation unit: K past snapshots plus the horizon-delta
// target, stored oldest-first.
struct Window {
  const Trajectory* traj = nullptr;
  int start = 0;   // index of the oldest past snapshot
  int k = 0;       // number of past snapshots
  int delta = 1;   // horizon in SRS periods

  CVec past(int i) const;  // i in [0, k)
  CVec target() const;
  int target_index() const { return start + k - 1 + delta; }
};

struct WindowRef {
  std::uint32_t traj = 0;
  std::uint32_t start = 0;
};

struct Dataset {
  ScenarioConfig scenario;
  std::vector<Trajectory> trajectories;
  int k = 15;
  std::vector<int> horizons;
  double split_ratio = 0.875;
  std::vector<std::uint32_t> train_trajs;
  std::vector<std::uint32_t> test_trajs;
  // Window indices per horizon slot, parallel to `horizons`.
  std::vector<std::vector<WindowRef>> train_windows;
  std::vector<std::vector<WindowRef>> test_windows;

  int horizon_slot(int delta) const;  // -1 when the horizon is absent
  const std::vector<WindowRef>& windows(int delta, bool train) const;
  Window make_window(const WindowRef& ref, int delta) const;
  int snapshots_per_trajectory() const;
  int windows_per_trajectory(int delta) const;  // T - K - delta + 1
};

// Enumerates every valid window per trajectory and splits train/test at
// trajectory granularity (first ceil-rounded fraction goes to train). Each
// trajectory is generated from rng.spawn(i), so generation order and thread
// count never change the result. In mixed-speed mode (speed_mps_max >
// speed_mps) trajectory speeds step from min to max at equal intervals.
Dataset build_dataset(const ScenarioConfig& cfg, int n_traj, int k,
                      const std::vector<int>& horizons, double split_ratio,
                      const Rng& rng, int n_threads = 1);

// Dataset file: magic "CHPD", u32 version, u32 N_b, u32 T, u32 n_traj,
// u8 dtype (1 = f64, 2 = f32), n_traj x u64 trajectory metadata words
// (bits 0-31 speed in mm/s, 32-39 scenario id, 40-63 seed index), then
// samples ordered [trajectory][time][antenna] as little-endian (re, im)
// pairs. Windows are derived views, never materialized on disk.
inline constexpr std::uint32_t kDatasetVersion = 1;

void save_dataset(const std::filesystem::path& path, const Dataset& ds,
                  int dtype = 1);

// Rebuilds window indices and the split from the stored trajectories; model
// geometry metadata (paths, positions) is not stored and stays empty.
Dataset load_dataset(const std::filesystem::path& path, int k,
                     const std::vector<int>& horizons, double split_ratio);

}  // namespace chanforecast::chan
