// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <string>
#include <vector>

#include "chanforecast/channel.hpp"

namespace chanforecast::analysis {

// |pred - truth|^2 / |truth|^2. Dataset aggregates average these per-sample
// ratios; dB values are 10 log10 of the linear figure.
double nmse(const CVec& pred, const CVec& truth);
double nmse_db(double nmse_linear);

// |a^H b| / (|a| |b|), in [0, 1]; invariant to phase and positive scaling.
double cosine_similarity(const CVec& a, const CVec& b);

// log2(1 + |h^T w|^2 / noise_var), bits/s/Hz.
double achievable_se(const CVec& h, const CVec& w, double noise_var);

struct AdfResult {
  double t_stat = 0.0;
  double p_value = 1.0;
  int lags = 0;
  int n = 0;  // sample length
};

// Unit-root regression with a constant and no trend:
//   dy_t = alpha + gamma y_{t-1} + sum_i beta_i dy_{t-i} + e_t
// The t-statistic of gamma is mapped to a p-value through a response surface
// calibrated against Monte Carlo simulation of the null distribution.
AdfResult adf_test(const std::vector<double>& series, int lags = 1);
AdfResult adf_test(const RVec& series, int lags = 1);

// p-value map for the constant-only case; exposed for validation tests.
double df_pvalue(double t_stat);

int schwert_lags(int n);  // floor(12 (n/100)^(1/4))

// Sliding-segment stationarity profile: the ADF test applied to the real part
// of antenna 0's series per segment; returns the p-values sorted ascending.
std::vector<double> pvalue_cdf(const std::vector<chan::Trajectory>& trajectories,
                               int segment_len, int stride, int lags = 1);

struct MetricsRow {
  std::string scenario;
  double speed_kmh = 0.0;
  double horizon_ms = 0.0;
  std::string method;
  double nmse_lin = 0.0;
  double nmse_db = 0.0;
  double cosine_pct = 0.0;
  long n = 0;
};

struct MetricsReport {
  std::vector<MetricsRow> rows;
  std::vector<std::uint64_t> seeds;
};

}  // namespace chanforecast::analysis
