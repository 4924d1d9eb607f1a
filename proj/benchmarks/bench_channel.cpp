// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "chanforecast/dataset.hpp"

using namespace chanforecast;

namespace {

void bm_snapshot(benchmark::State& state) {
  chan::ScenarioConfig cfg = chan::ScenarioConfig::nlos_preset();
  cfg.n_col = static_cast<int>(state.range(0));
  cfg.n_row = static_cast<int>(state.range(0));
  Rng rng(1);
  const Eigen::Vector3d ue{90.0, 10.0, 1.5};
  const chan::PathSet paths = chan::sample_paths(cfg, rng, ue);
  const Eigen::Vector3d vel{12.0, 5.0, 0.0};
  int t = 0;
  for (auto _ : state) {
    const CVec h = chan::snapshot(cfg, paths, ue, vel, ++t, chan::SnapshotMode::Drifting);
    benchmark::DoNotOptimize(h.sum());
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_antennas());
}

void bm_generate_trajectory(benchmark::State& state) {
  chan::ScenarioConfig cfg = chan::ScenarioConfig::nlos_preset();
  cfg.n_col = 2;
  cfg.n_row = 2;
  cfg.snapshots = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng = Rng(9).spawn(i++);
    const chan::Trajectory tr = chan::generate_trajectory(cfg, rng, i);
    benchmark::DoNotOptimize(tr.snapshots.sum());
  }
  state.SetItemsProcessed(state.iterations() * cfg.snapshots);
}

}  // namespace

BENCHMARK(bm_snapshot)->Arg(2)->Arg(4);
BENCHMARK(bm_generate_trajectory)->Arg(200)->Arg(700);
