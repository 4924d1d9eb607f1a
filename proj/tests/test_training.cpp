// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chanforecast/analysis.hpp"
#include "chanforecast/experiment.hpp"
#include "chanforecast/training.hpp"

using namespace chanforecast;
using namespace chanforecast::pred;

namespace {

chan::Dataset small_channel_dataset(std::uint64_t seed, int n_traj = 3, int t_total = 40,
                                    int k = 8) {
  chan::ScenarioConfig cfg;
  cfg.name = "custom";
  cfg.n_paths = 4;
  cfg.n_col = 1;
  cfg.n_row = 1;
  cfg.snapshots = t_total;
  cfg.speed_mps = 30.0 / 3.6;
  return chan::build_dataset(cfg, n_traj, k, {1}, 0.7, Rng(seed));
}

LpcnetConfig smoke_config(int k = 8) {
  LpcnetConfig cfg;
  cfg.k = k;
  cfg.n_z = 12;
  cfg.n_w = 6;
  cfg.n_s = 4;
  cfg.horizon = 1;
  cfg.learning_rate = 5e-3;
  cfg.batch_size = 16;
  cfg.epochs = 30;
  return cfg;
}

}  // namespace

TEST_CASE("training reduces the loss and is deterministic") {
  const chan::Dataset ds = small_channel_dataset(404);
  LpcnetConfig cfg = smoke_config();

  NnPredictor a(ModelKind::LPCNET, 2, cfg);
  NnPredictor b(ModelKind::LPCNET, 2, cfg);
  Rng ia(5), ib(5);
  a.init(ia);
  b.init(ib);

  Rng ta(6), tb(6);
  const TrainResult ra = train(a, ds, ta);
  const TrainResult rb = train(b, ds, tb);

  REQUIRE(ra.epoch_loss.size() == 30);
  for (double loss : ra.epoch_loss) CHECK(std::isfinite(loss));
  CHECK(ra.epoch_loss.back() <= ra.epoch_loss.front());
  CHECK((a.params().to_flat() - b.params().to_flat()).norm() == 0.0);
  CHECK(ra.final_full_loss == rb.final_full_loss);
}

TEST_CASE("one-window dataset is memorized") {
  // overfit smoke oracle: a single training window must be drivable to
  // near-zero normalized error
  chan::Dataset ds = small_channel_dataset(31, 2, 10, 8);
  // keep exactly one train window (T = K + delta)
  chan::ScenarioConfig cfg2 = ds.scenario;
  cfg2.snapshots = 9;
  ds = chan::build_dataset(cfg2, 2, 8, {1}, 0.5, Rng(31));
  REQUIRE(ds.windows(1, true).size() == 1);

  LpcnetConfig cfg = smoke_config();
  cfg.epochs = 200;
  cfg.learning_rate = 1e-2;
  NnPredictor model(ModelKind::LPCNET, 2, cfg);
  Rng init(9);
  model.init(init);
  Rng rng(10);
  const TrainResult r = train(model, ds, rng);
  CHECK(r.final_full_loss < 1e-3);
}

TEST_CASE("reference hyperparameters are accepted verbatim") {
  LpcnetConfig cfg;  // K=15, N_z=256, N_w=N_s=64, lr=1e-4, batch 200, epochs 1000
  CHECK(cfg.k == 15);
  CHECK(cfg.n_z == 256);
  CHECK(cfg.n_w == 64);
  CHECK(cfg.n_s == 64);
  CHECK(cfg.learning_rate == 1e-4);
  CHECK(cfg.batch_size == 200);
  CHECK(cfg.epochs == 1000);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.adjuster_input() == 14);  // N_i = K - 1
}

TEST_CASE("beam training loss stays within its bounds") {
  const chan::Dataset ds = small_channel_dataset(77);
  LpcnetConfig cfg = smoke_config();
  cfg.epochs = 10;
  NnPredictor model(ModelKind::JLPCNET, 2, cfg);
  Rng init(3);
  model.init(init);
  Rng rng(4);
  const TrainResult r = train(model, ds, rng);
  for (double loss : r.epoch_loss) {
    CHECK(loss <= 0.0);
    CHECK(loss >= -1.0);
  }
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());  // direction is learnable
}

TEST_CASE("recomputed train-partition loss equals the recorded final loss") {
  const chan::Dataset ds = small_channel_dataset(505);
  LpcnetConfig cfg = smoke_config();
  cfg.epochs = 5;
  NnPredictor model(ModelKind::LPCNET, 2, cfg);
  Rng init(12);
  model.init(init);
  Rng rng(13);
  const TrainResult r = train(model, ds, rng);

  // evaluation-path NMSE over the train partition, aggregated per sample
  const auto eval = experiment::evaluate_csi(
      ds, 1, /*train_part=*/true,
      [&](const chan::Window& w) { return model.predict(w); });
  CHECK(std::abs(eval.nmse_lin - r.final_full_loss) < 1e-9);
}

TEST_CASE("training rejects a mismatched dataset window length") {
  const chan::Dataset ds = small_channel_dataset(606, 3, 40, 8);
  LpcnetConfig cfg = smoke_config(9);  // model K = 9, dataset K = 8
  NnPredictor model(ModelKind::LPCNET, 2, cfg);
  Rng init(1);
  model.init(init);
  Rng rng(2);
  CHECK_THROWS_AS(train(model, ds, rng), std::invalid_argument);
}
