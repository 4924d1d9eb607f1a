// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "chanforecast/dataset.hpp"

using namespace chanforecast;
using namespace chanforecast::chan;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig cfg = ScenarioConfig::nlos_preset();
  cfg.n_col = 1;
  cfg.n_row = 2;
  cfg.snapshots = 20;
  return cfg;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("window arithmetic: T=20, K=15, delta=1 gives 5 windows per trajectory") {
  const ScenarioConfig cfg = small_config();
  const Rng rng(1);
  const Dataset ds = build_dataset(cfg, 4, 15, {1}, 0.75, rng);
  CHECK(ds.windows_per_trajectory(1) == 5);
  CHECK(ds.windows(1, true).size() == 15);  // 3 train trajectories
  CHECK(ds.windows(1, false).size() == 5);

  const Window w = ds.make_window(ds.windows(1, true).front(), 1);
  CHECK(w.target_index() == 15);
  CHECK(w.past(0).size() == cfg.n_antennas());
}

TEST_CASE("train and test trajectories are disjoint") {
  const ScenarioConfig cfg = small_config();
  const Rng rng(2);
  for (double ratio : {0.5, 0.75, 0.815, 0.9}) {
    const Dataset ds = build_dataset(cfg, 8, 15, {1, 2}, ratio, rng);
    CHECK(ds.train_trajs.size() + ds.test_trajs.size() == 8);
    CHECK(!ds.train_trajs.empty());
    CHECK(!ds.test_trajs.empty());
    for (auto t : ds.train_trajs)
      for (auto u : ds.test_trajs) CHECK(t != u);
    for (const auto& ref : ds.windows(2, true)) {
      bool in_train = false;
      for (auto t : ds.train_trajs) in_train |= (ref.traj == t);
      CHECK(in_train);
    }
  }
}

TEST_CASE("large-scale split fractions round to whole trajectories") {
  // a 110000 / 25000 sample budget over 60 environments: 0.8148... of 60
  const double ratio = 110000.0 / 135000.0;
  const long n_train = std::lround(ratio * 60);
  CHECK(n_train == 49);
}

TEST_CASE("mixed-speed datasets step speeds at equal intervals") {
  ScenarioConfig cfg = small_config();
  cfg.speed_mps = 30.0 / 3.6;
  cfg.speed_mps_max = 60.0 / 3.6;
  const Rng rng(3);
  const Dataset ds = build_dataset(cfg, 4, 15, {1}, 0.75, rng);
  const double lo = ds.trajectories[0].speed_mps;
  const double step01 = ds.trajectories[1].speed_mps - lo;
  const double step12 = ds.trajectories[2].speed_mps - ds.trajectories[1].speed_mps;
  CHECK(lo == doctest::Approx(30.0 / 3.6).epsilon(1e-12));
  CHECK(ds.trajectories[3].speed_mps == doctest::Approx(60.0 / 3.6).epsilon(1e-12));
  CHECK(step01 == doctest::Approx(step12).epsilon(1e-9));
}

TEST_CASE("build_dataset rejects short trajectories and bad splits") {
  ScenarioConfig cfg = small_config();
  const Rng rng(4);
  CHECK_THROWS_AS(build_dataset(cfg, 4, 15, {6}, 0.75, rng), std::invalid_argument);
  CHECK_THROWS_AS(build_dataset(cfg, 1, 15, {1}, 0.75, rng), std::invalid_argument);
  CHECK_THROWS_AS(build_dataset(cfg, 4, 15, {1}, 1.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(build_dataset(cfg, 4, 15, {0}, 0.75, rng), std::invalid_argument);
}

TEST_CASE("parallel generation is bit-identical to serial") {
  const ScenarioConfig cfg = small_config();
  const Rng rng(5);
  const Dataset serial = build_dataset(cfg, 6, 15, {1}, 0.75, rng, 1);
  const Dataset parallel = build_dataset(cfg, 6, 15, {1}, 0.75, rng, 4);
  for (int i = 0; i < 6; ++i) {
    const auto diff = (serial.trajectories[static_cast<std::size_t>(i)].snapshots -
                       parallel.trajectories[static_cast<std::size_t>(i)].snapshots)
                          .cwiseAbs()
                          .maxCoeff();
    CHECK(diff == 0.0);
  }
}

TEST_CASE("dataset file round trip preserves samples bit-exactly") {
  const ScenarioConfig cfg = small_config();
  const Rng rng(6);
  const Dataset ds = build_dataset(cfg, 3, 15, {1, 2}, 0.67, rng);
  const auto path = temp_file("chanforecast_test_roundtrip.chpd");

  save_dataset(path, ds, 1);
  const Dataset back = load_dataset(path, 15, {1, 2}, 0.67);

  REQUIRE(back.trajectories.size() == ds.trajectories.size());
  for (std::size_t i = 0; i < ds.trajectories.size(); ++i) {
    const auto& a = ds.trajectories[i];
    const auto& b = back.trajectories[i];
    CHECK((a.snapshots - b.snapshots).cwiseAbs().maxCoeff() == 0.0);
    CHECK(b.seed_index == a.seed_index);
    CHECK(b.cfg.name == a.cfg.name);
    CHECK(std::abs(b.speed_mps - a.speed_mps) < 5e-4);  // mm/s metadata rounding
  }
  CHECK(back.windows(1, true).size() == ds.windows(1, true).size());
  CHECK(back.windows(2, false).size() == ds.windows(2, false).size());

  // two saves of the same dataset are byte-identical
  const auto path2 = temp_file("chanforecast_test_roundtrip2.chpd");
  save_dataset(path2, ds, 1);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string bytes1((std::istreambuf_iterator<char>(f1)), {});
  const std::string bytes2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(bytes1 == bytes2);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("dataset file f32 storage loads with reduced precision") {
  const ScenarioConfig cfg = small_config();
  const Rng rng(7);
  const Dataset ds = build_dataset(cfg, 2, 15, {1}, 0.5, rng);
  const auto path = temp_file("chanforecast_test_f32.chpd");
  save_dataset(path, ds, 2);
  const Dataset back = load_dataset(path, 15, {1}, 0.5);
  const double err = (back.trajectories[0].snapshots - ds.trajectories[0].snapshots)
                         .cwiseAbs()
                         .maxCoeff();
  CHECK(err < 1e-6);  // float mantissa on O(1) samples
  CHECK(err > 0.0);   // not bit-exact
  std::filesystem::remove(path);
}

TEST_CASE("dataset loader rejects corrupt headers") {
  const auto path = temp_file("chanforecast_test_bad.chpd");
  std::ofstream os(path, std::ios::binary);
  os << "JUNKJUNKJUNK";
  os.close();
  CHECK_THROWS_AS(load_dataset(path, 15, {1}, 0.5), std::runtime_error);
  std::filesystem::remove(path);
}
