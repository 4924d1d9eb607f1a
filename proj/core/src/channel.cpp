// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chanforecast::chan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCollisionDistance = 0.1;  // m

// exp(j * 2*pi * cycles) with the integer part of `cycles` removed first, so
// delay phases at several thousand carrier cycles keep full precision.
cxd unit_phasor(double cycles) {
  const double frac = cycles - std::round(cycles);
  return cxd(std::cos(kTwoPi * frac), std::sin(kTwoPi * frac));
}

void fill_angles(Path& p) {
  p.aoa_el = std::acos(std::clamp(p.r_rx.z(), -1.0, 1.0));
  p.aoa_az = std::atan2(p.r_rx.y(), p.r_rx.x());
  p.aod_el = std::acos(std::clamp(p.r_tx.z(), -1.0, 1.0));
  p.aod_az = std::atan2(p.r_tx.y(), p.r_tx.x());
}

// Geometry of one path at a given UE position: delay plus the unit vectors.
void path_geometry(const Path& p, const Eigen::Vector3d& bs,
                   const Eigen::Vector3d& ue, double* delay_s,
                   Eigen::Vector3d* r_rx, Eigen::Vector3d* r_tx) {
  if (p.direct) {
    const Eigen::Vector3d d = ue - bs;
    const double dist = d.norm();
    *delay_s = dist / kSpeedOfLight;
    *r_tx = d / dist;
    *r_rx = -*r_tx;
  } else {
    const Eigen::Vector3d to_scat_bs = p.scatterer - bs;
    const Eigen::Vector3d to_scat_ue = p.scatterer - ue;
    const double d1 = to_scat_bs.norm();
    const double d2 = to_scat_ue.norm();
    *delay_s = (d1 + d2) / kSpeedOfLight;
    *r_tx = to_scat_bs / d1;
    *r_rx = to_scat_ue / d2;
  }
}

Eigen::Vector3d default_ue_start(const ScenarioConfig& cfg) {
  const double d = 0.5 * (cfg.ue_distance_min_m + cfg.ue_distance_max_m);
  return {d, 0.0, cfg.ue_height_m};
}

}  // namespace

void ScenarioConfig::validate() const {
  if (name == "LOS-like" && n_paths != 12)
    throw std::invalid_argument("ScenarioConfig: LOS-like preset requires L = 12");
  if (name == "NLOS-like" && n_paths != 21)
    throw std::invalid_argument("ScenarioConfig: NLOS-like preset requires L = 21");
  if (name != "LOS-like" && name != "NLOS-like" && name != "custom")
    throw std::invalid_argument("ScenarioConfig: unknown scenario '" + name + "'");
  if (n_paths < 1) throw std::invalid_argument("ScenarioConfig: L must be >= 1");
  if (carrier_hz <= 0.0) throw std::invalid_argument("ScenarioConfig: bad carrier");
  if (n_col < 1 || n_row < 1)
    throw std::invalid_argument("ScenarioConfig: antenna grid must be >= 1x1");
  if (srs_period_s <= 0.0) throw std::invalid_argument("ScenarioConfig: bad SRS period");
  if (speed_mps < 0.0) throw std::invalid_argument("ScenarioConfig: bad speed");
  if (snapshots < 1) throw std::invalid_argument("ScenarioConfig: T must be >= 1");
}

ScenarioConfig ScenarioConfig::los_preset() {
  ScenarioConfig cfg;
  cfg.name = "LOS-like";
  cfg.n_paths = 12;
  return cfg;
}

ScenarioConfig ScenarioConfig::nlos_preset() {
  ScenarioConfig cfg;
  cfg.name = "NLOS-like";
  cfg.n_paths = 21;
  return cfg;
}

double PathSet::total_power() const {
  double p = 0.0;
  for (const auto& path : paths)
    p += std::norm(path.gain[0]) + std::norm(path.gain[1]);
  return p;
}

std::vector<Eigen::Vector3d> antenna_positions(const ScenarioConfig& cfg) {
  const double d = cfg.element_spacing();
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<std::size_t>(cfg.n_antennas()));
  for (int pol = 0; pol < 2; ++pol)
    for (int row = 0; row < cfg.n_col; ++row)      // vertical index
      for (int col = 0; col < cfg.n_row; ++col)    // horizontal index
        out.emplace_back(0.0, col * d, row * d);
  return out;
}

Eigen::Vector3d bs_position(const ScenarioConfig& cfg) {
  return {0.0, 0.0, cfg.bs_height_m};
}

PathSet sample_paths(const ScenarioConfig& cfg, Rng& rng) {
  return sample_paths(cfg, rng, default_ue_start(cfg));
}

PathSet sample_paths(const ScenarioConfig& cfg, Rng& rng,
                     const Eigen::Vector3d& ue_pos) {
  cfg.validate();
  const Eigen::Vector3d bs = bs_position(cfg);
  const bool los = cfg.name == "LOS-like";
  const int n_scattered = los ? cfg.n_paths - 1 : cfg.n_paths;

  PathSet set;
  set.paths.reserve(static_cast<std::size_t>(cfg.n_paths));

  const Eigen::Vector3d mid = 0.5 * (bs + ue_pos);
  for (int i = 0; i < n_scattered; ++i) {
    Path p;
    const double r2min = cfg.scatter_radius_min_m * cfg.scatter_radius_min_m;
    const double r2max = cfg.scatter_radius_max_m * cfg.scatter_radius_max_m;
    const double radius = std::sqrt(rng.uniform(r2min, r2max));
    const double az = rng.uniform(0.0, kTwoPi);
    const double height = rng.uniform(cfg.scatter_height_min_m, cfg.scatter_height_max_m);
    p.scatterer = {mid.x() + radius * std::cos(az), mid.y() + radius * std::sin(az),
                   height};
    path_geometry(p, bs, ue_pos, &p.delay_s, &p.r_rx, &p.r_tx);
    fill_angles(p);
    set.paths.push_back(p);
  }

  // Shorter paths get more power: exponential profile over the configured span.
  std::sort(set.paths.begin(), set.paths.end(),
            [](const Path& a, const Path& b) { return a.delay_s < b.delay_s; });

  double direct_power = 0.0;
  double scattered_total = 2.0;
  if (los) {
    const double k_lin = std::pow(10.0, cfg.rician_k_db / 10.0);
    direct_power = 2.0 * k_lin / (1.0 + k_lin);
    scattered_total = 2.0 - direct_power;
  }

  std::vector<double> powers(static_cast<std::size_t>(n_scattered), 0.0);
  double norm = 0.0;
  for (int i = 0; i < n_scattered; ++i) {
    const double frac = n_scattered > 1
                            ? static_cast<double>(i) / static_cast<double>(n_scattered - 1)
                            : 0.0;
    powers[static_cast<std::size_t>(i)] = std::pow(10.0, -cfg.pdp_decay_db * frac / 10.0);
    norm += powers[static_cast<std::size_t>(i)];
  }
  for (auto& p : powers) p *= scattered_total / norm;

  const double chi = std::pow(10.0, -cfg.xpd_db / 10.0);
  const double co = std::sqrt(1.0 / (1.0 + chi));
  const double cross = std::sqrt(chi / (1.0 + chi));
  auto draw_gains = [&](Path& p, double power) {
    const cxd e_plus = unit_phasor(rng.uniform01());
    const cxd e_minus = unit_phasor(rng.uniform01());
    const double amp = std::sqrt(power / 2.0);
    p.gain[0] = amp * (co * e_plus + cross * e_minus);
    p.gain[1] = amp * (co * e_minus + cross * e_plus);
  };

  for (int i = 0; i < n_scattered; ++i)
    draw_gains(set.paths[static_cast<std::size_t>(i)], powers[static_cast<std::size_t>(i)]);

  if (los) {
    Path p;
    p.direct = true;
    path_geometry(p, bs, ue_pos, &p.delay_s, &p.r_rx, &p.r_tx);
    fill_angles(p);
    draw_gains(p, direct_power);
    set.paths.insert(set.paths.begin(), p);
  }

  // Exact unit average power per antenna: total over paths and ports is 2.
  const double scale = std::sqrt(2.0 / set.total_power());
  for (auto& p : set.paths) {
    p.gain[0] *= scale;
    p.gain[1] *= scale;
  }
  return set;
}

CVec snapshot(const ScenarioConfig& cfg, const PathSet& paths,
              const Eigen::Vector3d& ue_pos, const Eigen::Vector3d& velocity,
              int t_index, SnapshotMode mode) {
  const int n_b = cfg.n_antennas();
  const int per_pol = cfg.n_col * cfg.n_row;
  const double lambda = cfg.wavelength();
  const Eigen::Vector3d bs = bs_position(cfg);
  const std::vector<Eigen::Vector3d> elements = antenna_positions(cfg);
  const double t_s = t_index * cfg.srs_period_s;

  CVec h = CVec::Zero(n_b);
  for (const Path& p : paths.paths) {
    double delay = p.delay_s;
    Eigen::Vector3d r_rx = p.r_rx;
    Eigen::Vector3d r_tx = p.r_tx;
    double phase_cycles;
    if (mode == SnapshotMode::Static) {
      // Frozen geometry plus the linear Doppler phase r_rx . v / lambda * t.
      const double doppler_hz = r_rx.dot(velocity) / lambda;
      phase_cycles = doppler_hz * t_s - cfg.carrier_hz * delay;
    } else {
      path_geometry(p, bs, ue_pos, &delay, &r_rx, &r_tx);
      phase_cycles = -cfg.carrier_hz * delay;
    }
    const cxd path_phasor = unit_phasor(phase_cycles);
    for (int b = 0; b < n_b; ++b) {
      const int pol = b / per_pol;
      const cxd arr = unit_phasor(r_tx.dot(elements[static_cast<std::size_t>(b)]) / lambda);
      h(b) += p.gain[pol] * arr * path_phasor;
    }
  }
  if (!all_finite(h)) throw std::runtime_error("snapshot: non-finite channel entry");
  return h;
}

Trajectory generate_trajectory(const ScenarioConfig& cfg, Rng& rng,
                               std::uint64_t seed_index) {
  cfg.validate();
  const int t_total = cfg.snapshots;
  const double step = cfg.speed_mps * cfg.srs_period_s;

  Trajectory traj;
  traj.cfg = cfg;
  traj.speed_mps = cfg.speed_mps;
  traj.seed_index = seed_index;
  traj.positions.resize(static_cast<std::size_t>(t_total));
  traj.velocities.resize(static_cast<std::size_t>(t_total));

  const double start_az = rng.uniform(0.0, kTwoPi);
  const double start_dist = rng.uniform(cfg.ue_distance_min_m, cfg.ue_distance_max_m);
  const Eigen::Vector3d start{start_dist * std::cos(start_az),
                              start_dist * std::sin(start_az), cfg.ue_height_m};
  const double heading = rng.uniform(0.0, kTwoPi);

  if (cfg.trajectory == TrajectoryKind::Linear) {
    const Eigen::Vector3d dir{std::cos(heading), std::sin(heading), 0.0};
    for (int t = 0; t < t_total; ++t) {
      traj.positions[static_cast<std::size_t>(t)] = start + (t * step) * dir;
      traj.velocities[static_cast<std::size_t>(t)] = cfg.speed_mps * dir;
    }
  } else {
    const double radius = cfg.circle_radius_m;
    const double beta0 = heading - 0.5 * std::numbers::pi;
    const Eigen::Vector3d center =
        start - radius * Eigen::Vector3d{std::cos(beta0), std::sin(beta0), 0.0};
    const double omega = cfg.speed_mps / radius;  // heading azimuth rate
    for (int t = 0; t < t_total; ++t) {
      const double beta = beta0 + omega * t * cfg.srs_period_s;
      traj.positions[static_cast<std::size_t>(t)] =
          center + radius * Eigen::Vector3d{std::cos(beta), std::sin(beta), 0.0};
      traj.velocities[static_cast<std::size_t>(t)] =
          cfg.speed_mps * Eigen::Vector3d{-std::sin(beta), std::cos(beta), 0.0};
    }
  }

  traj.paths = sample_paths(cfg, rng, start);

  // A scatterer the UE would run through gets re-drawn (flagged).
  const Eigen::Vector3d bs = bs_position(cfg);
  for (auto& p : traj.paths.paths) {
    if (p.direct) continue;
    bool collides = true;
    while (collides) {
      collides = false;
      for (const auto& pos : traj.positions) {
        if ((p.scatterer - pos).norm() < kCollisionDistance) {
          collides = true;
          break;
        }
      }
      if (collides) {
        const double r2min = cfg.scatter_radius_min_m * cfg.scatter_radius_min_m;
        const double r2max = cfg.scatter_radius_max_m * cfg.scatter_radius_max_m;
        const double radius = std::sqrt(rng.uniform(r2min, r2max));
        const double az = rng.uniform(0.0, kTwoPi);
        const Eigen::Vector3d mid = 0.5 * (bs + start);
        p.scatterer = {mid.x() + radius * std::cos(az), mid.y() + radius * std::sin(az),
                       rng.uniform(cfg.scatter_height_min_m, cfg.scatter_height_max_m)};
        path_geometry(p, bs, start, &p.delay_s, &p.r_rx, &p.r_tx);
        fill_angles(p);
        ++traj.regenerated_paths;
      }
    }
  }

  traj.snapshots = CMat(t_total, cfg.n_antennas());
  for (int t = 0; t < t_total; ++t) {
    const CVec h = snapshot(cfg, traj.paths, traj.positions[static_cast<std::size_t>(t)],
                            traj.velocities[static_cast<std::size_t>(t)], t, cfg.mode);
    traj.snapshots.row(t) = h.transpose();
  }
  return traj;
}

std::uint8_t scenario_id(const std::string& name) {
  if (name == "LOS-like") return 0;
  if (name == "NLOS-like") return 1;
  return 255;
}

std::string scenario_name(std::uint8_t id) {
  switch (id) {
    case 0: return "LOS-like";
    case 1: return "NLOS-like";
    default: return "custom";
  }
}

}  // namespace chanforecast::chan
