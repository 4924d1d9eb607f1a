// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace chanforecast {

using cxd = std::complex<double>;

// Row-major storage throughout; vectors are plain column vectors.
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool all_finite(const RVec& v);
bool all_finite(const CVec& v);
bool all_finite(const RMat& m);
bool all_finite(const CMat& m);

/// Real layout of a complex vector is [all real | all imag], never interleaved.
RVec complex_to_real(const CVec& h);
CVec real_to_complex(const RVec& v);

/// Minimum-norm least-squares solution of A x = y via SVD, discarding
/// singular values below cutoff * sigma_max. cutoff must be in (0, 1).
CVec min_norm_lstsq(const CMat& a, const CVec& y, double cutoff = 1e-10);

/// Central-difference gradient, entry i = (f(p + eps e_i) - f(p - eps e_i)) / (2 eps).
/// Throws std::domain_error if f evaluates to a non-finite value.
RVec finite_diff_grad(const std::function<double(const RVec&)>& f,
                      const RVec& params, double eps);

/// Same, but with per-coordinate step eps_i = base_eps * max(1, |p_i|).
RVec finite_diff_grad_scaled(const std::function<double(const RVec&)>& f,
                             const RVec& params, double base_eps = 1e-6);

}  // namespace chanforecast
