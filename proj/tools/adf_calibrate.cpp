// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors
//
// Calibrates the unit-root p-value response surface: simulates the null
// distribution of the constant-case Dickey-Fuller t-statistic, fits
// z = poly(t) with p = Phi(z) on two branches, and prints the coefficient
// block pasted into core/src/analysis.cpp. Run once; the test suite
// re-validates the shipped constants against an independent simulation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "chanforecast/analysis.hpp"
#include "chanforecast/rng.hpp"

namespace {

using chanforecast::Rng;

// Inverse standard normal CDF (Acklam's rational approximation, ~1e-9).
double normal_ppf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) return -normal_ppf(1.0 - p);
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double df_t_stat_on_random_walk(Rng& rng, int length, int lags) {
  std::vector<double> y(static_cast<std::size_t>(length));
  double acc = 0.0;
  for (auto& v : y) {
    acc += rng.normal();
    v = acc;
  }
  return chanforecast::analysis::adf_test(y, lags).t_stat;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 1000000;
  const int length = argc > 2 ? std::atoi(argv[2]) : 1000;
  const int lags = 1;
  const std::uint64_t seed = 0xADFCA1Bu;

  std::printf("simulating %d null replications (T=%d, lags=%d)...\n", reps, length, lags);
  std::vector<double> stats(static_cast<std::size_t>(reps));
  Rng root(seed);
  for (int i = 0; i < reps; ++i) {
    Rng r = root.spawn(static_cast<std::uint64_t>(i));
    stats[static_cast<std::size_t>(i)] = df_t_stat_on_random_walk(r, length, lags);
  }
  std::sort(stats.begin(), stats.end());

  auto quantile = [&](double p) {
    const double idx = p * (reps - 1);
    const auto lo = static_cast<std::size_t>(idx);
    const double frac = idx - static_cast<double>(lo);
    return stats[lo] * (1.0 - frac) + stats[std::min<std::size_t>(lo + 1, stats.size() - 1)] * frac;
  };

  std::printf("key quantiles: 1%% %.4f  5%% %.4f  10%% %.4f  50%% %.4f  90%% %.4f\n",
              quantile(0.01), quantile(0.05), quantile(0.10), quantile(0.50),
              quantile(0.90));

  // Fit z = Phi^{-1}(p) as a polynomial in the t quantile on two branches,
  // anchoring the lower branch to the upper one at tau_star for continuity.
  const double tau_star = -1.6;
  auto collect = [&](double p_lo, double p_hi, bool upper_branch) {
    std::vector<std::pair<double, double>> pts;
    for (double p = p_lo; p <= p_hi + 1e-12; p += (p_hi - p_lo) / 400.0) {
      const double t = quantile(p);
      if (upper_branch != (t > tau_star)) continue;
      pts.emplace_back(t, normal_ppf(p));
    }
    return pts;
  };

  const auto large_pts = collect(0.04, 0.9995, true);
  Eigen::MatrixXd xl(large_pts.size(), 4);
  Eigen::VectorXd zl(large_pts.size());
  for (Eigen::Index i = 0; i < zl.size(); ++i) {
    const double t = large_pts[static_cast<std::size_t>(i)].first;
    xl(i, 0) = 1.0;
    xl(i, 1) = t;
    xl(i, 2) = t * t;
    xl(i, 3) = t * t * t;
    zl(i) = large_pts[static_cast<std::size_t>(i)].second;
  }
  const Eigen::VectorXd large_c = xl.colPivHouseholderQr().solve(zl);

  const double z_star = large_c(0) + tau_star * (large_c(1) +
                        tau_star * (large_c(2) + tau_star * large_c(3)));

  // Lower branch through (tau_star, z_star): z = z* + c1 dt + c2 dt^2.
  const auto small_pts = collect(0.0005, 0.06, false);
  Eigen::MatrixXd xs(small_pts.size(), 2);
  Eigen::VectorXd zs(small_pts.size());
  for (Eigen::Index i = 0; i < zs.size(); ++i) {
    const double dt = small_pts[static_cast<std::size_t>(i)].first - tau_star;
    xs(i, 0) = dt;
    xs(i, 1) = dt * dt;
    zs(i) = small_pts[static_cast<std::size_t>(i)].second - z_star;
  }
  const Eigen::VectorXd sc = xs.colPivHouseholderQr().solve(zs);
  Eigen::VectorXd small_c(3);
  small_c(0) = z_star - sc(0) * tau_star + sc(1) * tau_star * tau_star;
  small_c(1) = sc(0) - 2.0 * sc(1) * tau_star;
  small_c(2) = sc(1);

  std::printf("\n// paste into core/src/analysis.cpp:\n");
  std::printf("constexpr double kSmallP[3] = {%.6g, %.6g, %.6g};\n", small_c(0),
              small_c(1), small_c(2));
  std::printf("constexpr double kLargeP[4] = {%.6g, %.6g, %.6g, %.6g};\n", large_c(0),
              large_c(1), large_c(2), large_c(3));

  // Report the fit error and monotonicity over a dense grid.
  auto surface = [&](double t) {
    double z;
    if (t <= tau_star)
      z = small_c(0) + small_c(1) * t + small_c(2) * t * t;
    else
      z = large_c(0) + t * (large_c(1) + t * (large_c(2) + t * large_c(3)));
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
  };
  double worst = 0.0;
  for (double p = 0.002; p < 0.998; p += 0.002) {
    const double t = quantile(p);
    worst = std::max(worst, std::abs(surface(t) - p));
  }
  bool monotone = true;
  double prev = -1.0;
  for (double t = -8.0; t <= 2.6; t += 0.001) {
    const double p = surface(t);
    if (p < prev - 1e-12) monotone = false;
    prev = p;
  }
  std::printf("max |p_fit - p_emp| = %.5f, monotone = %s\n", worst,
              monotone ? "yes" : "NO");
  std::printf("t = -3.43 -> p = %.5f (empirical %.5f)\n", surface(-3.43),
              [&] {
                const auto it = std::lower_bound(stats.begin(), stats.end(), -3.43);
                return static_cast<double>(it - stats.begin()) / reps;
              }());
  return 0;
}
