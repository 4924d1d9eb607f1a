// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chanforecast/numerics.hpp"
#include "chanforecast/rng.hpp"

namespace chanforecast::chan {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class TrajectoryKind { Linear, Circular };

// Static mode freezes gains, angles and delays at their t=0 values and applies
// the linear Doppler phase; drifting mode (default) re-derives delays and
// arrival directions from the exact scatterer geometry at the current UE
// position, which reduces to the static phase law in the far-field limit.
enum class SnapshotMode { Static, Drifting };

struct ScenarioConfig {
  std::string name = "NLOS-like";  // "LOS-like" | "NLOS-like" | "custom"
  int n_paths = 21;                // L (includes the direct path for LOS)
  double carrier_hz = 3.5e9;       // f
  int n_col = 4;                   // N_l, antennas per column (vertical)
  int n_row = 4;                   // N_r, antennas per row (horizontal)
  double bs_height_m = 25.0;
  double rician_k_db = 10.0;       // direct-path power fraction, LOS only
  double pdp_decay_db = 20.0;      // power span across scattered paths
  double xpd_db = 8.0;             // cross-polar leakage between the +-45 ports
  double srs_period_s = 0.002;
  TrajectoryKind trajectory = TrajectoryKind::Linear;
  SnapshotMode mode = SnapshotMode::Drifting;
  double speed_mps = 60.0 / 3.6;
  double speed_mps_max = 0.0;      // > speed_mps enables mixed-speed datasets
  int snapshots = 700;             // T

  // Geometry defaults; trend reproduction only, no absolute-dB claims.
  double ue_height_m = 1.5;
  double ue_distance_min_m = 50.0;
  double ue_distance_max_m = 150.0;
  double scatter_radius_min_m = 20.0;
  double scatter_radius_max_m = 200.0;
  double scatter_height_min_m = 1.5;
  double scatter_height_max_m = 30.0;
  double circle_radius_m = 50.0;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  double element_spacing() const { return wavelength() / 2.0; }
  int n_antennas() const { return 2 * n_col * n_row; }

  // Enforces the preset path counts (12 LOS-like / 21 NLOS-like) and basic
  // sanity; "custom" configs only get the sanity checks.
  void validate() const;

  static ScenarioConfig los_preset();
  static ScenarioConfig nlos_preset();
};

struct Path {
  bool direct = false;
  Eigen::Vector3d scatterer = Eigen::Vector3d::Zero();  // meaningless when direct
  cxd gain[2] = {0.0, 0.0};  // per polarization port, [0]=+45, [1]=-45
  double delay_s = 0.0;      // tau at t=0
  Eigen::Vector3d r_rx = Eigen::Vector3d::UnitX();  // arrival unit vector, t=0
  Eigen::Vector3d r_tx = Eigen::Vector3d::UnitX();  // departure unit vector, t=0
  double aoa_az = 0.0, aoa_el = 0.0;  // azimuth / elevation of arrival
  double aod_az = 0.0, aod_el = 0.0;  // azimuth / elevation of departure
};

struct PathSet {
  std::vector<Path> paths;
  double total_power() const;  // sum of |gain|^2 over paths and ports
};

// Element offsets from the array reference point: an N_l x N_r grid at
// half-wavelength spacing in the y-z plane, two co-located ports per grid
// point. Ordering is polarization-major, then row-major over (col, row).
std::vector<Eigen::Vector3d> antenna_positions(const ScenarioConfig& cfg);

Eigen::Vector3d bs_position(const ScenarioConfig& cfg);  // (0, 0, bs_height)

// Scatterers uniform in a 3-D annulus around the BS-UE midpoint; exponential
// power-delay profile over the configured decay; independent uniform phases
// per polarization with cross-polar leakage at the configured XPD; the LOS
// preset adds one direct path carrying the Rician-K fraction of the power.
// Total power over paths and ports is normalized to exactly 2.
PathSet sample_paths(const ScenarioConfig& cfg, Rng& rng,
                     const Eigen::Vector3d& ue_pos);
PathSet sample_paths(const ScenarioConfig& cfg, Rng& rng);  // default UE start

// One channel snapshot h(t) across all antennas. t_index counts SRS periods.
CVec snapshot(const ScenarioConfig& cfg, const PathSet& paths,
              const Eigen::Vector3d& ue_pos, const Eigen::Vector3d& velocity,
              int t_index, SnapshotMode mode);

struct Trajectory {
  ScenarioConfig cfg;
  double speed_mps = 0.0;
  std::uint64_t seed_index = 0;
  int regenerated_paths = 0;  // scatterers re-drawn after a UE near-collision
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3d> velocities;
  PathSet paths;   // empty for trajectories loaded from a dataset file
  CMat snapshots;  // T x N_b
};

// UE advanced speed * T_s per snapshot along the configured track, one
// snapshot per SRS period. Draws only from `rng`, so equal seeds give
// bit-identical trajectories.
Trajectory generate_trajectory(const ScenarioConfig& cfg, Rng& rng,
                               std::uint64_t seed_index = 0);

std::uint8_t scenario_id(const std::string& name);
std::string scenario_name(std::uint8_t id);

}  // namespace chanforecast::chan
