// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/numerics.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace chanforecast {

bool all_finite(const RVec& v) { return v.allFinite(); }
bool all_finite(const CVec& v) { return v.real().allFinite() && v.imag().allFinite(); }
bool all_finite(const RMat& m) { return m.allFinite(); }
bool all_finite(const CMat& m) { return m.real().allFinite() && m.imag().allFinite(); }

RVec complex_to_real(const CVec& h) {
  const Eigen::Index n = h.size();
  RVec out(2 * n);
  out.head(n) = h.real();
  out.tail(n) = h.imag();
  return out;
}

CVec real_to_complex(const RVec& v) {
  if (v.size() % 2 != 0)
    throw std::invalid_argument("real_to_complex: size must be even");
  const Eigen::Index n = v.size() / 2;
  CVec out(n);
  out.real() = v.head(n);
  out.imag() = v.tail(n);
  return out;
}

CVec min_norm_lstsq(const CMat& a, const CVec& y, double cutoff) {
  if (a.rows() < 1 || a.cols() < 1)
    throw std::invalid_argument("min_norm_lstsq: empty system");
  if (a.rows() != y.size())
    throw std::invalid_argument("min_norm_lstsq: dimension mismatch");
  if (!(cutoff > 0.0 && cutoff < 1.0))
    throw std::invalid_argument("min_norm_lstsq: cutoff must be in (0, 1)");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double threshold = cutoff * (sigma.size() > 0 ? sigma(0) : 0.0);

  Eigen::VectorXcd uty = svd.matrixU().adjoint() * y;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    uty(i) = sigma(i) > threshold ? uty(i) / sigma(i) : cxd(0.0, 0.0);
  return svd.matrixV() * uty;
}

namespace {

RVec central_diff(const std::function<double(const RVec&)>& f, const RVec& params,
                  const RVec& steps) {
  RVec grad(params.size());
  RVec p = params;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double orig = p(i);
    const double eps = steps(i);
    p(i) = orig + eps;
    const double fp = f(p);
    p(i) = orig - eps;
    const double fm = f(p);
    p(i) = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::domain_error("finite_diff_grad: non-finite function evaluation");
    grad(i) = (fp - fm) / (2.0 * eps);
  }
  return grad;
}

}  // namespace

RVec finite_diff_grad(const std::function<double(const RVec&)>& f,
                      const RVec& params, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_grad: eps must be > 0");
  return central_diff(f, params, RVec::Constant(params.size(), eps));
}

RVec finite_diff_grad_scaled(const std::function<double(const RVec&)>& f,
                             const RVec& params, double base_eps) {
  if (!(base_eps > 0.0))
    throw std::invalid_argument("finite_diff_grad_scaled: eps must be > 0");
  RVec steps = base_eps * params.array().abs().max(1.0);
  return central_diff(f, params, steps);
}

}  // namespace chanforecast
