// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chanforecast::analysis {

double nmse(const CVec& pred, const CVec& truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("nmse: size mismatch");
  const double denom = truth.squaredNorm();
  if (denom == 0.0) throw std::invalid_argument("nmse: zero truth vector");
  return (pred - truth).squaredNorm() / denom;
}

double nmse_db(double nmse_linear) { return 10.0 * std::log10(nmse_linear); }

double cosine_similarity(const CVec& a, const CVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine_similarity: size mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("cosine_similarity: zero input");
  return std::abs(a.dot(b)) / (na * nb);  // Eigen's complex dot conjugates a
}

double achievable_se(const CVec& h, const CVec& w, double noise_var) {
  if (!(noise_var > 0.0))
    throw std::invalid_argument("achievable_se: noise variance must be > 0");
  if (h.size() != w.size()) throw std::invalid_argument("achievable_se: size mismatch");
  cxd s(0.0, 0.0);
  for (Eigen::Index i = 0; i < h.size(); ++i) s += h(i) * w(i);  // h^T w, no conjugate
  return std::log2(1.0 + std::norm(s) / noise_var);
}

// ---------------------------------------------------------------------------
// ADF test
// ---------------------------------------------------------------------------

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Response surface for the constant-only Dickey-Fuller t-distribution:
// p = Phi(poly(t)) on two branches. Coefficients fitted on 10^6 simulated
// null replications (sample length 1000, one lagged difference) by
// tools/adf_calibrate; validated in the test suite against an independent
// Monte Carlo table.
constexpr double kTauMin = -8.0;
constexpr double kTauMax = 2.6;
constexpr double kTauStar = -1.6;
// z(t) = c0 + c1 t + c2 t^2 (+ c3 t^3), small-p branch for t <= tau_star
constexpr double kSmallP[3] = {2.15421, 1.43707, 0.0389323};
constexpr double kLargeP[4] = {1.72384, 0.971799, -0.030987, 0.0329758};

}  // namespace

double df_pvalue(double t_stat) {
  if (t_stat <= kTauMin) return 0.0;
  if (t_stat >= kTauMax) return 1.0;
  double z;
  if (t_stat <= kTauStar) {
    z = kSmallP[0] + kSmallP[1] * t_stat + kSmallP[2] * t_stat * t_stat;
  } else {
    z = kLargeP[0] + t_stat * (kLargeP[1] + t_stat * (kLargeP[2] + t_stat * kLargeP[3]));
  }
  return std::clamp(normal_cdf(z), 0.0, 1.0);
}

AdfResult adf_test(const std::vector<double>& series, int lags) {
  const int n = static_cast<int>(series.size());
  if (lags < 0) throw std::invalid_argument("adf_test: lags must be >= 0");
  if (n < lags + 10)
    throw std::invalid_argument("adf_test: series too short for the lag order");

  const int m = n - 1 - lags;  // regression rows
  const int k = 2 + lags;      // constant, level, lagged differences
  RMat x(m, k);
  RVec y(m);
  for (int r = 0; r < m; ++r) {
    const int t = lags + 1 + r;  // index into the level series
    y(r) = series[static_cast<std::size_t>(t)] - series[static_cast<std::size_t>(t - 1)];
    x(r, 0) = 1.0;
    x(r, 1) = series[static_cast<std::size_t>(t - 1)];
    for (int i = 1; i <= lags; ++i)
      x(r, 1 + i) = series[static_cast<std::size_t>(t - i)] -
                    series[static_cast<std::size_t>(t - i - 1)];
  }

  const RMat xtx = x.transpose() * x;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("adf_test: singular regression matrix");
  const RVec beta = ldlt.solve(x.transpose() * y);

  const RVec resid = y - x * beta;
  const double dof = static_cast<double>(m - k);
  if (dof < 1.0) throw std::invalid_argument("adf_test: not enough observations");
  const double s2 = resid.squaredNorm() / dof;

  RVec e1 = RVec::Zero(k);
  e1(1) = 1.0;
  const double var_gamma = s2 * ldlt.solve(e1)(1);
  if (!(var_gamma > 0.0)) throw std::runtime_error("adf_test: singular regression matrix");

  AdfResult out;
  out.t_stat = beta(1) / std::sqrt(var_gamma);
  out.p_value = df_pvalue(out.t_stat);
  out.lags = lags;
  out.n = n;
  return out;
}

AdfResult adf_test(const RVec& series, int lags) {
  return adf_test(std::vector<double>(series.data(), series.data() + series.size()),
                  lags);
}

int schwert_lags(int n) {
  return static_cast<int>(std::floor(12.0 * std::pow(n / 100.0, 0.25)));
}

std::vector<double> pvalue_cdf(const std::vector<chan::Trajectory>& trajectories,
                               int segment_len, int stride, int lags) {
  if (segment_len < lags + 10)
    throw std::invalid_argument("pvalue_cdf: segment too short");
  if (stride < 1) throw std::invalid_argument("pvalue_cdf: stride must be >= 1");

  std::vector<double> pvalues;
  std::vector<double> segment(static_cast<std::size_t>(segment_len));
  for (const auto& traj : trajectories) {
    const int t_total = static_cast<int>(traj.snapshots.rows());
    for (int start = 0; start + segment_len <= t_total; start += stride) {
      for (int t = 0; t < segment_len; ++t)
        segment[static_cast<std::size_t>(t)] = traj.snapshots(start + t, 0).real();
      pvalues.push_back(adf_test(segment, lags).p_value);
    }
  }
  std::sort(pvalues.begin(), pvalues.end());
  return pvalues;
}

}  // namespace chanforecast::analysis
