// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <functional>
#include <limits>

#include "chanforecast/analysis.hpp"
#include "chanforecast/predictors.hpp"

namespace chanforecast::experiment {

struct MethodResult {
  double nmse_lin = std::numeric_limits<double>::quiet_NaN();
  double nmse_db = std::numeric_limits<double>::quiet_NaN();
  double cosine_pct = std::numeric_limits<double>::quiet_NaN();
  long n = 0;
};

// Per-window evaluation over one partition at one horizon. CSI predictors are
// scored by NMSE and by the cosine similarity of their matched-filter beams,
// which equals the channel-space cosine; beam predictors score cosine only.
// Workers write into index-addressed slots, so thread count never changes the
// aggregate.
MethodResult evaluate_csi(const chan::Dataset& ds, int delta, bool train_part,
                          const std::function<CVec(const chan::Window&)>& predict,
                          int n_threads = 1);

MethodResult evaluate_beam(const chan::Dataset& ds, int delta, bool train_part,
                           const std::function<CVec(const chan::Window&)>& predict,
                           int n_threads = 1);

// Dispatches on kind: sh and ar run on the fly, the NN kinds use `model`.
MethodResult evaluate_method(const chan::Dataset& ds, int delta, bool train_part,
                             pred::ModelKind kind, const pred::NnPredictor* model,
                             int ar_order = 5, int n_threads = 1);

// Speed label for reports: the dataset's trajectory speeds in km/h (mean when
// mixed), rounded to two decimals.
double dataset_speed_kmh(const chan::Dataset& ds);

analysis::MetricsRow make_row(const chan::Dataset& ds, int delta,
                              const std::string& method, const MethodResult& r,
                              double srs_period_s);

// Worker cap: CHANFORECAST_THREADS when set, hardware concurrency otherwise.
int default_threads();

}  // namespace chanforecast::experiment
