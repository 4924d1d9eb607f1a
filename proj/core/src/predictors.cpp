// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/predictors.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "chanforecast/checkpoint.hpp"

namespace chanforecast::pred {

std::string kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::SH: return "sh";
    case ModelKind::AR: return "ar";
    case ModelKind::LSTM: return "lstm";
    case ModelKind::LPCNET: return "lpcnet";
    case ModelKind::JLPCNET: return "jlpcnet";
  }
  throw std::logic_error("kind_name: bad kind");
}

ModelKind kind_from_name(const std::string& name) {
  if (name == "sh") return ModelKind::SH;
  if (name == "ar") return ModelKind::AR;
  if (name == "lstm") return ModelKind::LSTM;
  if (name == "lpcnet") return ModelKind::LPCNET;
  if (name == "jlpcnet") return ModelKind::JLPCNET;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

void LpcnetConfig::validate() const {
  if (k < 2) throw std::invalid_argument("LpcnetConfig: K must be >= 2");
  if (n_z < 1 || n_w < 1 || n_s < 1)
    throw std::invalid_argument("LpcnetConfig: widths must be >= 1");
  if (horizon < 1) throw std::invalid_argument("LpcnetConfig: horizon must be >= 1");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("LpcnetConfig: learning rate must be > 0");
  if (batch_size < 1) throw std::invalid_argument("LpcnetConfig: batch size must be >= 1");
  if (epochs < 0) throw std::invalid_argument("LpcnetConfig: epochs must be >= 0");
  if (ar_order < 1) throw std::invalid_argument("LpcnetConfig: AR order must be >= 1");
}

std::size_t param_count_closed_form(int n_b, int n_z, int n_i, int n_w, int n_s) {
  const auto b = static_cast<std::size_t>(n_b);
  const auto z = static_cast<std::size_t>(n_z);
  const auto i = static_cast<std::size_t>(n_i);
  const auto w = static_cast<std::size_t>(n_w);
  const auto s = static_cast<std::size_t>(n_s);
  return 10 * b * z + 4 * z * z + i * s + i * w + w * z + 5 * z + 2 * b + 2 * s + w + 1;
}

// ---------------------------------------------------------------------------
// Classical predictors
// ---------------------------------------------------------------------------

CVec sh_predict(const chan::Window& w) { return w.past(w.k - 1); }

ArPrediction ar_predict(const chan::Window& w, int order) {
  if (w.k <= order)
    throw std::invalid_argument("ar_predict: window length must exceed the order");
  const int n_b = static_cast<int>(w.past(0).size());
  const int m = w.k - order;

  ArPrediction out;
  out.value = CVec::Zero(n_b);

  // Gather the window once, antennas as columns.
  CMat series(w.k, n_b);
  for (int t = 0; t < w.k; ++t) series.row(t) = w.past(t).transpose();

  for (int b = 0; b < n_b; ++b) {
    CMat a(m, order);
    CVec rhs(m);
    for (int r = 0; r < m; ++r) {
      rhs(r) = series(order + r, b);
      for (int i = 1; i <= order; ++i) a(r, i - 1) = series(order + r - i, b);
    }

    bool ok = true;
    CVec coeff;
    try {
      coeff = min_norm_lstsq(a, rhs, 1e-10);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok && !all_finite(coeff)) ok = false;

    cxd pred = series(w.k - 1, b);
    if (ok) {
      // Iterate the recursion delta steps past the window end.
      std::vector<cxd> tail(static_cast<std::size_t>(order));
      for (int i = 0; i < order; ++i)
        tail[static_cast<std::size_t>(i)] = series(w.k - 1 - i, b);  // newest first
      for (int step = 0; step < w.delta; ++step) {
        cxd next(0.0, 0.0);
        for (int i = 0; i < order; ++i)
          next += coeff(i) * tail[static_cast<std::size_t>(i)];
        for (int i = order - 1; i > 0; --i)
          tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i - 1)];
        tail[0] = next;
      }
      pred = tail[0];
      if (!std::isfinite(pred.real()) || !std::isfinite(pred.imag())) {
        ok = false;
        pred = series(w.k - 1, b);
      }
    }
    if (!ok) out.fell_back = true;
    out.value(b) = pred;
  }
  return out;
}

std::vector<RVec> difference_preprocess(const std::vector<RVec>& seq) {
  if (seq.size() < 2)
    throw std::invalid_argument("difference_preprocess: need at least 2 elements");
  std::vector<RVec> out;
  out.reserve(seq.size() - 1);
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) out.push_back(seq[t + 1] - seq[t]);
  return out;
}

CVec zf_beamform(const CVec& h, double power) {
  if (!(power > 0.0)) throw std::invalid_argument("zf_beamform: power must be > 0");
  const double n = h.norm();
  if (n == 0.0) throw std::invalid_argument("zf_beamform: zero channel");
  return std::sqrt(power) * h.conjugate() / n;
}

// ---------------------------------------------------------------------------
// Neural predictor engine
// ---------------------------------------------------------------------------

namespace {

// Fills the per-coordinate history matrix: column j * n2 + c holds the length
// n_i history of coordinate c of window j.
RMat build_adjuster_inputs(const std::vector<RMat>& steps) {
  const auto n_i = static_cast<Eigen::Index>(steps.size());
  const Eigen::Index n2 = steps[0].rows();
  const Eigen::Index batch = steps[0].cols();
  RMat xadj(n_i, n2 * batch);
  for (Eigen::Index t = 0; t < n_i; ++t)
    for (Eigen::Index j = 0; j < batch; ++j)
      xadj.block(t, j * n2, 1, n2) = steps[static_cast<std::size_t>(t)].col(j).transpose();
  return xadj;
}

RMat engine_forward(const std::vector<RMat>& raw, const nn::ParamStore& params,
                    const LpcnetConfig& cfg, ForwardCache* cache) {
  if (static_cast<int>(raw.size()) != cfg.k)
    throw std::invalid_argument("forward: expected K input steps");
  const Eigen::Index n2 = raw[0].rows();
  const Eigen::Index batch = raw[0].cols();
  for (const auto& x : raw)
    if (x.rows() != n2 || x.cols() != batch)
      throw std::invalid_argument("forward: ragged input batch");

  std::vector<RMat> local_steps;
  std::vector<RMat>& steps = cache ? cache->seq : local_steps;
  steps.clear();
  if (cfg.enable_diff) {
    steps.reserve(raw.size() - 1);
    for (std::size_t t = 0; t + 1 < raw.size(); ++t) steps.push_back(raw[t + 1] - raw[t]);
  } else {
    steps = raw;
  }

  RMat z = nn::lstm_forward(std::span<const RMat>(steps.data(), steps.size()), params,
                            "lstm", cache ? &cache->lstm : nullptr);

  RMat aw, ab;
  if (cfg.enable_adjuster) {
    RMat xadj = build_adjuster_inputs(steps);
    aw = nn::mlp2_forward_batch(xadj, params, "adj_w", cache ? &cache->hw : nullptr);
    ab = nn::mlp2_forward_batch(xadj, params, "adj_b", cache ? &cache->hb : nullptr);
    if (cache) cache->xadj = std::move(xadj);
  }

  const RMat& w = params.value("head.W");
  const RMat& b = params.value("head.b");
  RMat y(n2, batch);
  RMat geff(n2, w.cols());
  for (Eigen::Index j = 0; j < batch; ++j) {
    if (cfg.enable_adjuster) {
      geff = (aw.middleCols(j * n2, n2).transpose().array() * w.array()).matrix();
      y.col(j).noalias() = geff * z.col(j);
      y.col(j) += (ab.middleCols(j * n2, n2).transpose().col(0).array() *
                   b.col(0).array()).matrix();
    } else {
      y.col(j).noalias() = w * z.col(j);
      y.col(j) += b.col(0);
    }
    if (cfg.enable_residual) y.col(j) += raw.back().col(j);
  }

  if (cache) {
    cache->z = std::move(z);
    cache->aw = std::move(aw);
    cache->ab = std::move(ab);
  }
  if (!y.allFinite()) throw std::runtime_error("forward: non-finite output");
  return y;
}

void engine_backward(const ForwardCache& cache, const RMat& d_out,
                     nn::ParamStore& params, const LpcnetConfig& cfg) {
  const RMat& w = params.value("head.W");
  const RMat& b = params.value("head.b");
  const Eigen::Index n2 = d_out.rows();
  const Eigen::Index batch = d_out.cols();

  RMat dz(cache.z.rows(), batch);
  if (cfg.enable_adjuster) {
    RMat d_aw(cache.aw.rows(), cache.aw.cols());
    RMat d_ab(1, cache.ab.cols());
    RMat& g_w = params.grad("head.W");
    RMat& g_b = params.grad("head.b");
    RMat geff(n2, w.cols());
    RMat outer(n2, w.cols());
    for (Eigen::Index j = 0; j < batch; ++j) {
      auto aw_block = cache.aw.middleCols(j * n2, n2);
      geff = (aw_block.transpose().array() * w.array()).matrix();
      dz.col(j).noalias() = geff.transpose() * d_out.col(j);
      outer.noalias() = d_out.col(j) * cache.z.col(j).transpose();
      g_w += (outer.array() * aw_block.transpose().array()).matrix();
      d_aw.middleCols(j * n2, n2) = (outer.array() * w.array()).matrix().transpose();
      g_b.col(0) += (d_out.col(j).array() *
                     cache.ab.middleCols(j * n2, n2).transpose().col(0).array()).matrix();
      d_ab.middleCols(j * n2, n2) =
          (d_out.col(j).array() * b.col(0).array()).matrix().transpose();
    }
    nn::mlp2_backward_batch(cache.xadj, cache.hw, d_aw, params, "adj_w");
    nn::mlp2_backward_batch(cache.xadj, cache.hb, d_ab, params, "adj_b");
  } else {
    dz.noalias() = w.transpose() * d_out;
    params.grad("head.W").noalias() += d_out * cache.z.transpose();
    params.grad("head.b").col(0) += d_out.rowwise().sum();
  }

  nn::lstm_backward(cache.lstm, dz, params, "lstm");
}

std::vector<RMat> window_to_raw(const chan::Window& w) {
  const Eigen::Index n_b = w.past(0).size();
  std::vector<RMat> raw(static_cast<std::size_t>(w.k));
  for (int t = 0; t < w.k; ++t) {
    RMat col(2 * n_b, 1);
    const CVec h = w.past(t);
    col.col(0).head(n_b) = h.real();
    col.col(0).tail(n_b) = h.imag();
    raw[static_cast<std::size_t>(t)] = std::move(col);
  }
  return raw;
}

}  // namespace

NnPredictor::NnPredictor(ModelKind kind, int n_b, LpcnetConfig cfg)
    : kind_(kind), n_b_(n_b), cfg_(cfg) {
  if (kind == ModelKind::SH || kind == ModelKind::AR)
    throw std::invalid_argument("NnPredictor: kind has no parameters");
  if (n_b < 1) throw std::invalid_argument("NnPredictor: n_b must be >= 1");
  if (kind == ModelKind::LSTM) {
    // Plain recurrent baseline: raw input, static linear readout. The
    // last-snapshot residual stays: without it the baseline has to emit
    // absolute channel values and cannot generalize to unseen environments.
    cfg_.enable_diff = false;
    cfg_.enable_adjuster = false;
    cfg_.enable_residual = true;
  }
  if (kind == ModelKind::JLPCNET) cfg_.enable_residual = false;
  cfg_.validate();

  const int n2 = 2 * n_b;
  nn::add_lstm_params(params_, "lstm", n2, cfg_.n_z);
  params_.add("head.W", n2, cfg_.n_z, nn::InitKind::UniformFanIn);
  params_.add("head.b", n2, 1, nn::InitKind::Zero);
  if (cfg_.enable_adjuster) {
    nn::add_mlp2_params(params_, "adj_w", cfg_.adjuster_input(), cfg_.n_w, cfg_.n_z,
                        /*hyper_output=*/true);
    nn::add_mlp2_params(params_, "adj_b", cfg_.adjuster_input(), cfg_.n_s, 1,
                        /*hyper_output=*/true);
  }
}

void NnPredictor::init(Rng& rng) { nn::init_params(params_, rng); }

CVec NnPredictor::predict(const chan::Window& w) const {
  const RMat y = engine_forward(window_to_raw(w), params_, cfg_, nullptr);
  return real_to_complex(y.col(0));
}

RMat NnPredictor::forward_batch(const std::vector<RMat>& raw_seq,
                                ForwardCache* cache) const {
  return engine_forward(raw_seq, params_, cfg_, cache);
}

void NnPredictor::backward_batch(const ForwardCache& cache, const RMat& d_out) {
  engine_backward(cache, d_out, params_, cfg_);
}

double NnPredictor::loss_batch(const chan::Dataset& ds,
                               std::span<const chan::WindowRef> refs, bool backward) {
  if (refs.empty()) throw std::invalid_argument("loss_batch: empty batch");
  const int n2 = 2 * n_b_;
  const auto batch = static_cast<Eigen::Index>(refs.size());

  std::vector<RMat> raw(static_cast<std::size_t>(cfg_.k), RMat(n2, batch));
  RMat target(n2, batch);
  for (Eigen::Index j = 0; j < batch; ++j) {
    const chan::Window w = ds.make_window(refs[static_cast<std::size_t>(j)], cfg_.horizon);
    for (int t = 0; t < cfg_.k; ++t) {
      const CVec h = w.past(t);
      raw[static_cast<std::size_t>(t)].col(j).head(n_b_) = h.real();
      raw[static_cast<std::size_t>(t)].col(j).tail(n_b_) = h.imag();
    }
    CVec tgt = w.target();
    if (kind_ == ModelKind::JLPCNET) tgt = zf_beamform(tgt, 1.0);
    target.col(j).head(n_b_) = tgt.real();
    target.col(j).tail(n_b_) = tgt.imag();
  }

  ForwardCache cache;
  const RMat y = engine_forward(raw, params_, cfg_, backward ? &cache : nullptr);

  RMat d_pred;
  const bool bf = kind_ == ModelKind::JLPCNET;
  const double loss = bf ? cosine_loss(y, target, backward ? &d_pred : nullptr)
                         : nmse_loss(y, target, backward ? &d_pred : nullptr);
  if (backward) engine_backward(cache, d_pred, params_, cfg_);
  return loss;
}

CVec lpcnet_forward(const chan::Window& w, const nn::ParamStore& params,
                    const LpcnetConfig& cfg) {
  const RMat y = engine_forward(window_to_raw(w), params, cfg, nullptr);
  return real_to_complex(y.col(0));
}

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

double nmse_loss(const RMat& pred, const RMat& target, RMat* d_pred) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw std::invalid_argument("nmse_loss: shape mismatch");
  const Eigen::Index batch = pred.cols();
  if (d_pred) d_pred->resize(pred.rows(), batch);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < batch; ++j) {
    const double denom = target.col(j).squaredNorm();
    if (denom == 0.0) throw std::invalid_argument("nmse_loss: zero target");
    sum += (pred.col(j) - target.col(j)).squaredNorm() / denom;
    if (d_pred)
      d_pred->col(j) = 2.0 * (pred.col(j) - target.col(j)) /
                       (denom * static_cast<double>(batch));
  }
  return sum / static_cast<double>(batch);
}

double cosine_loss(const RMat& pred, const RMat& target, RMat* d_pred) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw std::invalid_argument("cosine_loss: shape mismatch");
  if (pred.rows() % 2 != 0)
    throw std::invalid_argument("cosine_loss: rows must stack [re | im]");
  const Eigen::Index n = pred.rows() / 2;
  const Eigen::Index batch = pred.cols();
  if (d_pred) d_pred->resize(pred.rows(), batch);

  double sum = 0.0;
  RVec jt(2 * n);
  for (Eigen::Index j = 0; j < batch; ++j) {
    const auto a = pred.col(j);
    const auto t = target.col(j);
    const double na = a.norm();
    const double nt = t.norm();
    if (na == 0.0)
      throw std::domain_error("cosine_loss: degenerate (all-zero) beam direction");
    if (nt == 0.0) throw std::invalid_argument("cosine_loss: zero target");

    // s = p^H t in the complex reading of the stacked columns.
    const double s_re = a.dot(t);
    const double s_im = a.head(n).dot(t.tail(n)) - a.tail(n).dot(t.head(n));
    const double s_abs = std::hypot(s_re, s_im);
    const double rho = s_abs / (na * nt);
    sum -= rho;

    if (d_pred) {
      jt.head(n) = t.tail(n);
      jt.tail(n) = -t.head(n);
      const RVec g_abs = (s_re * t + s_im * jt) / (s_abs + 1e-300);
      d_pred->col(j) =
          -(g_abs / (na * nt) - rho * a / (na * na)) / static_cast<double>(batch);
    }
  }
  return sum / static_cast<double>(batch);
}

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

namespace {

constexpr char kModelMagic[4] = {'C', 'F', 'N', 'M'};
constexpr std::uint32_t kModelVersion = 1;

void write_u32_le(std::ostream& os, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, 4);
}

std::uint32_t read_u32_le(std::istream& is) {
  char buf[4];
  if (!is.read(buf, 4)) throw std::runtime_error("model file: truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(buf[i])) << (8 * i);
  return v;
}

}  // namespace

void save_model(const std::filesystem::path& path, const NnPredictor& model) {
  nlohmann::json header;
  header["kind"] = kind_name(model.kind());
  header["n_b"] = model.n_b();
  const LpcnetConfig& c = model.config();
  header["config"] = {{"K", c.k},
                      {"N_z", c.n_z},
                      {"N_w", c.n_w},
                      {"N_s", c.n_s},
                      {"horizon", c.horizon},
                      {"enable_diff", c.enable_diff},
                      {"enable_adjuster", c.enable_adjuster},
                      {"enable_residual", c.enable_residual},
                      {"learning_rate", c.learning_rate},
                      {"batch_size", c.batch_size},
                      {"epochs", c.epochs},
                      {"ar_order", c.ar_order}};
  const std::string text = header.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_model: cannot open " + path.string());
  os.write(kModelMagic, 4);
  write_u32_le(os, kModelVersion);
  write_u32_le(os, static_cast<std::uint32_t>(text.size()));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  nn::save_params(os, model.params());
  if (!os) throw std::runtime_error("save_model: write failure");
}

NnPredictor load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_model: cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0)
    throw std::runtime_error("load_model: bad magic");
  if (read_u32_le(is) != kModelVersion)
    throw std::runtime_error("load_model: unsupported version");
  const std::uint32_t len = read_u32_le(is);
  std::string text(len, '\0');
  if (!is.read(text.data(), len)) throw std::runtime_error("load_model: truncated");

  const nlohmann::json header = nlohmann::json::parse(text);
  LpcnetConfig cfg;
  const auto& c = header.at("config");
  cfg.k = c.at("K").get<int>();
  cfg.n_z = c.at("N_z").get<int>();
  cfg.n_w = c.at("N_w").get<int>();
  cfg.n_s = c.at("N_s").get<int>();
  cfg.horizon = c.at("horizon").get<int>();
  cfg.enable_diff = c.at("enable_diff").get<bool>();
  cfg.enable_adjuster = c.at("enable_adjuster").get<bool>();
  cfg.enable_residual = c.at("enable_residual").get<bool>();
  cfg.learning_rate = c.at("learning_rate").get<double>();
  cfg.batch_size = c.at("batch_size").get<int>();
  cfg.epochs = c.at("epochs").get<int>();
  cfg.ar_order = c.value("ar_order", 5);

  NnPredictor model(kind_from_name(header.at("kind").get<std::string>()),
                    header.at("n_b").get<int>(), cfg);

  nn::ParamStore loaded = nn::load_params(is);
  if (loaded.tensor_count() != model.params().tensor_count())
    throw std::runtime_error("load_model: parameter layout mismatch");
  for (const auto& e : loaded.entries()) {
    RMat& dst = model.params().value(e.name);
    if (dst.rows() != e.value.rows() || dst.cols() != e.value.cols())
      throw std::runtime_error("load_model: shape mismatch for '" + e.name + "'");
    dst = e.value;
  }
  return model;
}

}  // namespace chanforecast::pred
