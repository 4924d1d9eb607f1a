// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace chanforecast::experiment {

namespace {

struct Sample {
  double nmse = 0.0;
  double cosine = 0.0;
};

std::vector<Sample> run_windows(const chan::Dataset& ds, int delta, bool train_part,
                                const std::function<CVec(const chan::Window&)>& predict,
                                bool beam, int n_threads) {
  const auto& refs = ds.windows(delta, train_part);
  std::vector<Sample> slots(refs.size());

  auto work = [&](std::size_t i) {
    const chan::Window w = ds.make_window(refs[i], delta);
    const CVec truth = w.target();
    const CVec pred = predict(w);
    Sample s;
    if (beam) {
      s.cosine = analysis::cosine_similarity(pred, pred::zf_beamform(truth, 1.0));
    } else {
      s.nmse = analysis::nmse(pred, truth);
      // cosine of zf(pred) vs zf(truth) collapses to the channel-space cosine
      s.cosine = analysis::cosine_similarity(pred, truth);
    }
    slots[i] = s;
  };

  if (n_threads <= 1) {
    for (std::size_t i = 0; i < refs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min<std::size_t>(n_threads, refs.size());
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < refs.size(); i = next.fetch_add(1))
          work(i);
      });
    for (auto& t : pool) t.join();
  }
  return slots;
}

MethodResult reduce(const std::vector<Sample>& slots, bool beam) {
  MethodResult r;
  r.n = static_cast<long>(slots.size());
  if (slots.empty()) return r;
  double nmse_sum = 0.0;
  double cos_sum = 0.0;
  for (const auto& s : slots) {  // fixed index order
    nmse_sum += s.nmse;
    cos_sum += s.cosine;
  }
  r.cosine_pct = 100.0 * cos_sum / static_cast<double>(slots.size());
  if (!beam) {
    r.nmse_lin = nmse_sum / static_cast<double>(slots.size());
    r.nmse_db = analysis::nmse_db(r.nmse_lin);
  }
  return r;
}

}  // namespace

MethodResult evaluate_csi(const chan::Dataset& ds, int delta, bool train_part,
                          const std::function<CVec(const chan::Window&)>& predict,
                          int n_threads) {
  return reduce(run_windows(ds, delta, train_part, predict, false, n_threads), false);
}

MethodResult evaluate_beam(const chan::Dataset& ds, int delta, bool train_part,
                           const std::function<CVec(const chan::Window&)>& predict,
                           int n_threads) {
  return reduce(run_windows(ds, delta, train_part, predict, true, n_threads), true);
}

MethodResult evaluate_method(const chan::Dataset& ds, int delta, bool train_part,
                             pred::ModelKind kind, const pred::NnPredictor* model,
                             int ar_order, int n_threads) {
  using pred::ModelKind;
  switch (kind) {
    case ModelKind::SH:
      return evaluate_csi(ds, delta, train_part,
                          [](const chan::Window& w) { return pred::sh_predict(w); },
                          n_threads);
    case ModelKind::AR:
      return evaluate_csi(
          ds, delta, train_part,
          [ar_order](const chan::Window& w) { return pred::ar_predict(w, ar_order).value; },
          n_threads);
    case ModelKind::LSTM:
    case ModelKind::LPCNET: {
      if (!model) throw std::invalid_argument("evaluate_method: model required");
      return evaluate_csi(ds, delta, train_part,
                          [model](const chan::Window& w) { return model->predict(w); },
                          n_threads);
    }
    case ModelKind::JLPCNET: {
      if (!model) throw std::invalid_argument("evaluate_method: model required");
      return evaluate_beam(ds, delta, train_part,
                           [model](const chan::Window& w) { return model->predict(w); },
                           n_threads);
    }
  }
  throw std::logic_error("evaluate_method: bad kind");
}

double dataset_speed_kmh(const chan::Dataset& ds) {
  if (ds.trajectories.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : ds.trajectories) sum += t.speed_mps;
  const double kmh = 3.6 * sum / static_cast<double>(ds.trajectories.size());
  return std::round(kmh * 100.0) / 100.0;
}

analysis::MetricsRow make_row(const chan::Dataset& ds, int delta,
                              const std::string& method, const MethodResult& r,
                              double srs_period_s) {
  analysis::MetricsRow row;
  row.scenario = ds.scenario.name;
  row.speed_kmh = dataset_speed_kmh(ds);
  row.horizon_ms = delta * srs_period_s * 1e3;
  row.method = method;
  row.nmse_lin = r.nmse_lin;
  row.nmse_db = r.nmse_db;
  row.cosine_pct = r.cosine_pct;
  row.n = r.n;
  return row;
}

int default_threads() {
  if (const char* env = std::getenv("CHANFORECAST_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace chanforecast::experiment
