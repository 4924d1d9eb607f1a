// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace chanforecast::nn {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double relu(double x) { return x > 0.0 ? x : 0.0; }

// ---------------------------------------------------------------------------
// ParamStore
// ---------------------------------------------------------------------------

std::size_t ParamStore::add(const std::string& name, Eigen::Index rows,
                            Eigen::Index cols, InitKind init) {
  if (index_.count(name))
    throw std::invalid_argument("ParamStore: duplicate tensor name '" + name + "'");
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("ParamStore: tensor '" + name + "' has empty shape");
  Entry e;
  e.name = name;
  e.value = RMat::Zero(rows, cols);
  e.grad = RMat::Zero(rows, cols);
  e.init = init;
  entries_.push_back(std::move(e));
  index_[name] = entries_.size() - 1;
  return entries_.size() - 1;
}

bool ParamStore::has(const std::string& name) const { return index_.count(name) > 0; }

const ParamStore::Entry& ParamStore::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw std::invalid_argument("ParamStore: unknown tensor '" + name + "'");
  return entries_[it->second];
}

RMat& ParamStore::value(const std::string& name) {
  return const_cast<Entry&>(at(name)).value;
}
const RMat& ParamStore::value(const std::string& name) const { return at(name).value; }
RMat& ParamStore::grad(const std::string& name) {
  return const_cast<Entry&>(at(name)).grad;
}
const RMat& ParamStore::grad(const std::string& name) const { return at(name).grad; }

std::size_t ParamStore::total_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += static_cast<std::size_t>(e.value.size());
  return n;
}

void ParamStore::zero_grads() {
  for (auto& e : entries_) e.grad.setZero();
}

RVec ParamStore::to_flat() const {
  RVec flat(total_count());
  Eigen::Index off = 0;
  for (const auto& e : entries_) {
    for (Eigen::Index r = 0; r < e.value.rows(); ++r)
      for (Eigen::Index c = 0; c < e.value.cols(); ++c) flat(off++) = e.value(r, c);
  }
  return flat;
}

void ParamStore::from_flat(const RVec& flat) {
  if (static_cast<std::size_t>(flat.size()) != total_count())
    throw std::invalid_argument("ParamStore::from_flat: size mismatch");
  Eigen::Index off = 0;
  for (auto& e : entries_) {
    for (Eigen::Index r = 0; r < e.value.rows(); ++r)
      for (Eigen::Index c = 0; c < e.value.cols(); ++c) e.value(r, c) = flat(off++);
  }
}

RVec ParamStore::grads_to_flat() const {
  RVec flat(total_count());
  Eigen::Index off = 0;
  for (const auto& e : entries_) {
    for (Eigen::Index r = 0; r < e.grad.rows(); ++r)
      for (Eigen::Index c = 0; c < e.grad.cols(); ++c) flat(off++) = e.grad(r, c);
  }
  return flat;
}

void init_params(ParamStore& store, Rng& rng) {
  for (auto& e : store.entries()) {
    switch (e.init) {
      case InitKind::Zero:
        e.value.setZero();
        break;
      case InitKind::One:
        e.value.setOnes();
        break;
      case InitKind::UniformFanIn:
      case InitKind::HyperOutputWeight: {
        const double bound = 1.0 / std::sqrt(static_cast<double>(e.value.cols()));
        const double scale = e.init == InitKind::HyperOutputWeight ? 0.01 : 1.0;
        for (Eigen::Index r = 0; r < e.value.rows(); ++r)
          for (Eigen::Index c = 0; c < e.value.cols(); ++c)
            e.value(r, c) = scale * rng.uniform(-bound, bound);
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// LSTM
// ---------------------------------------------------------------------------

void add_lstm_params(ParamStore& store, const std::string& prefix, int input_size,
                     int hidden_size) {
  if (input_size < 1 || hidden_size < 1)
    throw std::invalid_argument("add_lstm_params: sizes must be >= 1");
  store.add(prefix + ".W_x", 4 * hidden_size, input_size, InitKind::UniformFanIn);
  store.add(prefix + ".W_h", 4 * hidden_size, hidden_size, InitKind::UniformFanIn);
  store.add(prefix + ".b", 4 * hidden_size, 1, InitKind::Zero);
}

LstmState lstm_step(const LstmState& state, const RVec& x, const ParamStore& params,
                    const std::string& prefix) {
  const RMat& wx = params.value(prefix + ".W_x");
  const RMat& wh = params.value(prefix + ".W_h");
  const RMat& b = params.value(prefix + ".b");
  const Eigen::Index h = wh.cols();
  if (x.size() != wx.cols() || state.c.size() != h || state.z.size() != h)
    throw std::invalid_argument("lstm_step: shape mismatch");

  RVec pre = wx * x + wh * state.z + b.col(0);
  RVec gi = pre.segment(0, h).unaryExpr([](double v) { return sigmoid(v); });
  RVec gf = pre.segment(h, h).unaryExpr([](double v) { return sigmoid(v); });
  RVec gg = pre.segment(2 * h, h).array().tanh().matrix();
  RVec go = pre.segment(3 * h, h).unaryExpr([](double v) { return sigmoid(v); });

  LstmState out;
  out.c = gf.cwiseProduct(state.c) + gi.cwiseProduct(gg);
  out.z = go.cwiseProduct(out.c.array().tanh().matrix());
  return out;
}

RMat lstm_forward(std::span<const RMat> xs, const ParamStore& params,
                  const std::string& prefix, LstmCache* cache) {
  if (xs.empty()) throw std::invalid_argument("lstm_forward: empty sequence");
  const RMat& wx = params.value(prefix + ".W_x");
  const RMat& wh = params.value(prefix + ".W_h");
  const RMat& b = params.value(prefix + ".b");
  const Eigen::Index h = wh.cols();
  const Eigen::Index batch = xs[0].cols();

  if (cache) {
    cache->x.clear(); cache->gi.clear(); cache->gf.clear(); cache->gg.clear();
    cache->go.clear(); cache->c.clear(); cache->tanh_c.clear(); cache->z.clear();
  }

  RMat c = RMat::Zero(h, batch);
  RMat z = RMat::Zero(h, batch);
  RMat pre(4 * h, batch);
  for (const RMat& x : xs) {
    if (x.rows() != wx.cols() || x.cols() != batch)
      throw std::invalid_argument("lstm_forward: input shape mismatch");
    pre.noalias() = wx * x;
    pre.noalias() += wh * z;
    pre.colwise() += b.col(0);

    RMat gi = pre.topRows(h).unaryExpr([](double v) { return sigmoid(v); });
    RMat gf = pre.middleRows(h, h).unaryExpr([](double v) { return sigmoid(v); });
    RMat gg = pre.middleRows(2 * h, h).array().tanh().matrix();
    RMat go = pre.bottomRows(h).unaryExpr([](double v) { return sigmoid(v); });

    RMat c_next = (gf.array() * c.array() + gi.array() * gg.array()).matrix();
    RMat tanh_c = c_next.array().tanh().matrix();
    RMat z_next = (go.array() * tanh_c.array()).matrix();
    if (cache) {
      cache->x.push_back(x);
      cache->gi.push_back(std::move(gi));
      cache->gf.push_back(std::move(gf));
      cache->gg.push_back(std::move(gg));
      cache->go.push_back(std::move(go));
      cache->c.push_back(c_next);
      cache->tanh_c.push_back(std::move(tanh_c));
      cache->z.push_back(z_next);
    }
    c = std::move(c_next);
    z = std::move(z_next);
  }
  return z;
}

void lstm_backward(const LstmCache& cache, const RMat& d_z_last, ParamStore& params,
                   const std::string& prefix) {
  const std::size_t steps = cache.x.size();
  if (steps == 0) throw std::invalid_argument("lstm_backward: empty cache");
  const RMat& wh = params.value(prefix + ".W_h");
  RMat& g_wx = params.grad(prefix + ".W_x");
  RMat& g_wh = params.grad(prefix + ".W_h");
  RMat& g_b = params.grad(prefix + ".b");
  const Eigen::Index h = wh.cols();
  const Eigen::Index batch = d_z_last.cols();

  RMat dz = d_z_last;
  RMat dc = RMat::Zero(h, batch);
  RMat dpre(4 * h, batch);
  for (std::size_t s = steps; s-- > 0;) {
    const RMat& gi = cache.gi[s];
    const RMat& gf = cache.gf[s];
    const RMat& gg = cache.gg[s];
    const RMat& go = cache.go[s];
    const RMat& tanh_c = cache.tanh_c[s];
    const bool first = (s == 0);

    RMat d_o = (dz.array() * tanh_c.array()).matrix();
    dc.array() += dz.array() * go.array() * (1.0 - tanh_c.array().square());

    RMat d_i = (dc.array() * gg.array()).matrix();
    RMat d_g = (dc.array() * gi.array()).matrix();

    dpre.topRows(h) = (d_i.array() * gi.array() * (1.0 - gi.array())).matrix();
    if (first)
      dpre.middleRows(h, h).setZero();  // c_{-1} = 0, forget gate sees nothing
    else
      dpre.middleRows(h, h) = (dc.array() * cache.c[s - 1].array() * gf.array() *
                               (1.0 - gf.array())).matrix();
    dpre.middleRows(2 * h, h) = (d_g.array() * (1.0 - gg.array().square())).matrix();
    dpre.bottomRows(h) = (d_o.array() * go.array() * (1.0 - go.array())).matrix();

    g_wx.noalias() += dpre * cache.x[s].transpose();
    if (!first) g_wh.noalias() += dpre * cache.z[s - 1].transpose();
    g_b.col(0) += dpre.rowwise().sum();

    if (!first) {
      dz.noalias() = wh.transpose() * dpre;
      dc = (dc.array() * gf.array()).matrix();
    }
  }
}

// ---------------------------------------------------------------------------
// MLP
// ---------------------------------------------------------------------------

void add_mlp2_params(ParamStore& store, const std::string& prefix, int input_size,
                     int hidden_size, int output_size, bool hyper_output) {
  if (input_size < 1 || hidden_size < 1 || output_size < 1)
    throw std::invalid_argument("add_mlp2_params: sizes must be >= 1");
  store.add(prefix + ".W1", hidden_size, input_size, InitKind::UniformFanIn);
  store.add(prefix + ".b1", hidden_size, 1, InitKind::Zero);
  store.add(prefix + ".W2", output_size, hidden_size,
            hyper_output ? InitKind::HyperOutputWeight : InitKind::UniformFanIn);
  store.add(prefix + ".b2", output_size, 1,
            hyper_output ? InitKind::One : InitKind::Zero);
}

RVec mlp2_forward(const RVec& x, const ParamStore& params, const std::string& prefix) {
  RMat xm = x;
  RMat y = mlp2_forward_batch(xm, params, prefix, nullptr);
  return y.col(0);
}

RMat mlp2_forward_batch(const RMat& x, const ParamStore& params,
                        const std::string& prefix, RMat* hidden_cache) {
  const RMat& w1 = params.value(prefix + ".W1");
  const RMat& b1 = params.value(prefix + ".b1");
  const RMat& w2 = params.value(prefix + ".W2");
  const RMat& b2 = params.value(prefix + ".b2");
  if (x.rows() != w1.cols()) throw std::invalid_argument("mlp2_forward: shape mismatch");

  RMat hidden = ((w1 * x).colwise() + b1.col(0)).cwiseMax(0.0);
  RMat out = (w2 * hidden).colwise() + b2.col(0);
  if (hidden_cache) *hidden_cache = std::move(hidden);
  return out;
}

void mlp2_backward_batch(const RMat& x, const RMat& hidden_cache, const RMat& d_out,
                         ParamStore& params, const std::string& prefix) {
  const RMat& w2 = params.value(prefix + ".W2");
  params.grad(prefix + ".W2").noalias() += d_out * hidden_cache.transpose();
  params.grad(prefix + ".b2").col(0) += d_out.rowwise().sum();

  RMat d_hidden = w2.transpose() * d_out;
  d_hidden = (hidden_cache.array() > 0.0).select(d_hidden, 0.0);

  params.grad(prefix + ".W1").noalias() += d_hidden * x.transpose();
  params.grad(prefix + ".b1").col(0) += d_hidden.rowwise().sum();
}

// ---------------------------------------------------------------------------
// ADAM
// ---------------------------------------------------------------------------

void AdamState::reset() {
  step = 0;
  m.clear();
  v.clear();
}

void adam_update(ParamStore& params, AdamState& opt) {
  auto& entries = params.entries();
  if (opt.m.empty()) {
    opt.m.reserve(entries.size());
    opt.v.reserve(entries.size());
    for (const auto& e : entries) {
      opt.m.push_back(RMat::Zero(e.value.rows(), e.value.cols()));
      opt.v.push_back(RMat::Zero(e.value.rows(), e.value.cols()));
    }
  }
  if (opt.m.size() != entries.size())
    throw std::invalid_argument("adam_update: optimizer/store mismatch");

  for (const auto& e : entries)
    if (!e.grad.allFinite())
      throw std::domain_error("adam_update: non-finite gradient in '" + e.name + "'");

  opt.step += 1;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    auto& e = entries[k];
    opt.m[k] = opt.beta1 * opt.m[k] + (1.0 - opt.beta1) * e.grad;
    opt.v[k] = (opt.beta2 * opt.v[k].array() +
                (1.0 - opt.beta2) * e.grad.array().square()).matrix();
    e.value.array() -= opt.lr * (opt.m[k].array() / bc1) /
                       ((opt.v[k].array() / bc2).sqrt() + opt.eps);
  }
}

}  // namespace chanforecast::nn
