// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <functional>

#include "chanforecast/predictors.hpp"

namespace chanforecast::pred {

struct TrainOptions {
  // Called after each epoch with (epoch index, mean train loss).
  std::function<void(int, double)> on_epoch;
  // Multiplicative learning-rate decay applied after every epoch (1 = none).
  double lr_decay = 1.0;
  // Global gradient-norm clip before each update (0 = off).
  double grad_clip_norm = 0.0;
};

struct TrainResult {
  std::vector<double> epoch_loss;   // mean mini-batch loss per epoch
  double final_full_loss = 0.0;     // full pass over the train partition, no updates
};

// Mini-batch ADAM over shuffled train windows at the model's horizon.
// Single-threaded and deterministic given the rng. Aborts with diagnostics
// (epoch, batch, parameter norm) if the loss turns non-finite.
TrainResult train(NnPredictor& model, const chan::Dataset& ds, Rng& rng,
                  const TrainOptions& opts = {});

}  // namespace chanforecast::pred
