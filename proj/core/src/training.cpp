// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/training.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chanforecast::pred {

namespace {

double full_pass_loss(NnPredictor& model, const chan::Dataset& ds,
                      const std::vector<chan::WindowRef>& refs, int chunk) {
  double sum = 0.0;
  for (std::size_t start = 0; start < refs.size(); start += static_cast<std::size_t>(chunk)) {
    const std::size_t n = std::min<std::size_t>(chunk, refs.size() - start);
    const double loss = model.loss_batch(
        ds, std::span<const chan::WindowRef>(refs.data() + start, n), /*backward=*/false);
    sum += loss * static_cast<double>(n);
  }
  return sum / static_cast<double>(refs.size());
}

}  // namespace

TrainResult train(NnPredictor& model, const chan::Dataset& ds, Rng& rng,
                  const TrainOptions& opts) {
  const LpcnetConfig& cfg = model.config();
  const auto& refs = ds.windows(cfg.horizon, /*train=*/true);
  if (refs.empty()) throw std::invalid_argument("train: empty train partition");
  if (ds.k != cfg.k)
    throw std::invalid_argument("train: dataset window length differs from model K");

  nn::AdamState adam;
  adam.lr = cfg.learning_rate;

  const auto n = static_cast<std::uint32_t>(refs.size());
  const int batch = std::min<int>(cfg.batch_size, static_cast<int>(n));
  std::vector<chan::WindowRef> shuffled(refs.size());

  TrainResult result;
  result.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::vector<std::uint32_t> perm = rng.permutation(n);
    for (std::uint32_t i = 0; i < n; ++i) shuffled[i] = refs[perm[i]];

    double sum = 0.0;
    int batch_index = 0;
    for (std::size_t start = 0; start < shuffled.size();
         start += static_cast<std::size_t>(batch), ++batch_index) {
      const std::size_t count = std::min<std::size_t>(batch, shuffled.size() - start);
      model.params().zero_grads();
      const double loss = model.loss_batch(
          ds, std::span<const chan::WindowRef>(shuffled.data() + start, count),
          /*backward=*/true);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "train: non-finite loss at epoch " << epoch << ", batch " << batch_index
            << ", parameter norm " << model.params().to_flat().norm();
        throw std::runtime_error(msg.str());
      }
      if (opts.grad_clip_norm > 0.0) {
        double sq = 0.0;
        for (const auto& e : model.params().entries()) sq += e.grad.squaredNorm();
        const double norm = std::sqrt(sq);
        if (norm > opts.grad_clip_norm) {
          const double scale = opts.grad_clip_norm / norm;
          for (auto& e : model.params().entries()) e.grad *= scale;
        }
      }
      nn::adam_update(model.params(), adam);
      sum += loss * static_cast<double>(count);
    }
    const double mean = sum / static_cast<double>(n);
    result.epoch_loss.push_back(mean);
    if (opts.on_epoch) opts.on_epoch(epoch, mean);
    adam.lr *= opts.lr_decay;
  }

  result.final_full_loss = full_pass_loss(model, ds, refs, batch);
  return result;
}

}  // namespace chanforecast::pred
