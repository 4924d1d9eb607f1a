// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "chanforecast/nn.hpp"
#include "chanforecast/predictors.hpp"

using namespace chanforecast;

namespace {

std::vector<RMat> random_sequence(Rng& rng, int steps, int rows, int cols) {
  std::vector<RMat> xs(static_cast<std::size_t>(steps));
  for (auto& x : xs) {
    x.resize(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) x(i, j) = rng.normal();
  }
  return xs;
}

void bm_lstm_forward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  const int batch = 200;
  nn::ParamStore store;
  nn::add_lstm_params(store, "lstm", 16, hidden);
  Rng rng(1);
  nn::init_params(store, rng);
  const auto xs = random_sequence(rng, 14, 16, batch);
  for (auto _ : state) {
    const RMat z = nn::lstm_forward(std::span<const RMat>(xs.data(), xs.size()), store,
                                    "lstm", nullptr);
    benchmark::DoNotOptimize(z.sum());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

void bm_lstm_forward_backward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  const int batch = 200;
  nn::ParamStore store;
  nn::add_lstm_params(store, "lstm", 16, hidden);
  Rng rng(1);
  nn::init_params(store, rng);
  const auto xs = random_sequence(rng, 14, 16, batch);
  nn::LstmCache cache;
  for (auto _ : state) {
    store.zero_grads();
    const RMat z = nn::lstm_forward(std::span<const RMat>(xs.data(), xs.size()), store,
                                    "lstm", &cache);
    nn::lstm_backward(cache, z, store, "lstm");
    benchmark::DoNotOptimize(store.grad("lstm.W_h").sum());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

void bm_predictor_train_batch(benchmark::State& state) {
  chan::ScenarioConfig cfg = chan::ScenarioConfig::nlos_preset();
  cfg.n_col = 2;
  cfg.n_row = 2;
  cfg.snapshots = 260;
  const chan::Dataset ds = chan::build_dataset(cfg, 2, 15, {1}, 0.5, Rng(3));

  pred::LpcnetConfig mc;
  mc.k = 15;
  mc.n_z = static_cast<int>(state.range(0));
  mc.n_w = 32;
  mc.n_s = 32;
  pred::NnPredictor model(pred::ModelKind::LPCNET, cfg.n_antennas(), mc);
  Rng init(4);
  model.init(init);

  const auto& refs = ds.windows(1, true);
  const std::span<const chan::WindowRef> batch(refs.data(),
                                               std::min<std::size_t>(200, refs.size()));
  for (auto _ : state) {
    model.params().zero_grads();
    benchmark::DoNotOptimize(model.loss_batch(ds, batch, true));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(batch.size()));
}

void bm_adam_update(benchmark::State& state) {
  pred::LpcnetConfig mc;
  mc.n_z = 256;
  pred::NnPredictor model(pred::ModelKind::LPCNET, 32, mc);
  Rng init(5);
  model.init(init);
  for (auto& e : model.params().entries()) e.grad.setConstant(1e-3);
  nn::AdamState opt;
  for (auto _ : state) {
    nn::adam_update(model.params(), opt);
    benchmark::DoNotOptimize(model.params().value("head.b").sum());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(model.params().total_count()));
}

}  // namespace

BENCHMARK(bm_lstm_forward)->Arg(64)->Arg(256);
BENCHMARK(bm_lstm_forward_backward)->Arg(64)->Arg(256);
BENCHMARK(bm_predictor_train_batch)->Arg(64);
BENCHMARK(bm_adam_update);
