// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chanforecast/dataset.hpp"
#include "chanforecast/nn.hpp"

namespace chanforecast::pred {

enum class ModelKind { SH, AR, LSTM, LPCNET, JLPCNET };

std::string kind_name(ModelKind kind);
ModelKind kind_from_name(const std::string& name);

struct LpcnetConfig {
  int k = 15;        // input sequence length
  int n_z = 256;     // LSTM width
  int n_w = 64;      // weight-adjuster hidden width
  int n_s = 64;      // bias-adjuster hidden width
  int horizon = 1;   // prediction lead in SRS periods
  bool enable_diff = true;      // first-order difference preprocessing
  bool enable_adjuster = true;  // hypernetwork branch
  bool enable_residual = true;  // add the last observed snapshot to the output
  double learning_rate = 1e-4;
  int batch_size = 200;
  int epochs = 1000;
  int ar_order = 5;

  int seq_len() const { return enable_diff ? k - 1 : k; }
  int adjuster_input() const { return seq_len(); }  // N_i
  void validate() const;
};

// Closed-form parameter total of the full configuration (LSTM encoder,
// adjusted linear readout, both adjuster MLPs) with n_i = k - 1.
std::size_t param_count_closed_form(int n_b, int n_z, int n_i, int n_w, int n_s);

// -- Classical predictors ----------------------------------------------------

// Latest past snapshot, unchanged, for any horizon.
CVec sh_predict(const chan::Window& w);

struct ArPrediction {
  CVec value;
  bool fell_back = false;  // degenerate fit replaced by sample-and-hold
};

// Per antenna element independently: fit complex AR(order) coefficients on the
// in-window samples by minimum-norm least squares, then iterate the recursion
// `delta` steps ahead.
ArPrediction ar_predict(const chan::Window& w, int order = 5);

// h~_t = h_{t+1} - h_t elementwise; output length is input length - 1.
std::vector<RVec> difference_preprocess(const std::vector<RVec>& seq);

// Single-user power-constrained beam w = sqrt(P) conj(h) / |h|; maximizes
// |h^T w| under |w^H w| <= P.
CVec zf_beamform(const CVec& h, double power);

// -- Neural predictors --------------------------------------------------------

// Batched forward cache; reused by the backward pass.
struct ForwardCache {
  std::vector<RMat> seq;  // encoder inputs per step (2 n_b x B)
  nn::LstmCache lstm;
  RMat z;     // final hidden state (n_z x B)
  RMat xadj;  // adjuster inputs (n_i x (2 n_b * B))
  RMat hw, hb;
  RMat aw;    // weight adjustments (n_z x (2 n_b * B))
  RMat ab;    // bias adjustments (1 x (2 n_b * B))
};

// One parameter layout and forward engine serves the plain LSTM baseline
// (all flags off), the adjusted predictor, and the beam predictor (residual
// off, cosine-trained, output read as an unnormalized BF vector).
class NnPredictor {
 public:
  NnPredictor(ModelKind kind, int n_b, LpcnetConfig cfg);

  ModelKind kind() const { return kind_; }
  int n_b() const { return n_b_; }
  const LpcnetConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  void init(Rng& rng);

  CVec predict(const chan::Window& w) const;

  // Batched forward over raw real-valued sequences (k steps of 2 n_b x B).
  RMat forward_batch(const std::vector<RMat>& raw_seq, ForwardCache* cache) const;
  void backward_batch(const ForwardCache& cache, const RMat& d_out);

  // Loss (and gradients, when backward) over a set of windows at the model's
  // horizon. NMSE loss for CSI predictors, negative cosine for beam predictors.
  double loss_batch(const chan::Dataset& ds, std::span<const chan::WindowRef> refs,
                    bool backward);

 private:
  ModelKind kind_;
  int n_b_;
  LpcnetConfig cfg_;
  nn::ParamStore params_;
};

// Forward pipeline as a free function over a single window.
CVec lpcnet_forward(const chan::Window& w, const nn::ParamStore& params,
                    const LpcnetConfig& cfg);

// -- Training losses ----------------------------------------------------------

// Mean over columns of |pred - target|^2 / |target|^2.
double nmse_loss(const RMat& pred, const RMat& target, RMat* d_pred);

// Mean over columns of -|p^H t| / (|p| |t|), columns read as [re | im]
// stacked complex vectors. Bounded in [-1, 0].
double cosine_loss(const RMat& pred, const RMat& target, RMat* d_pred);

// -- Model files ----------------------------------------------------------------
// Magic "CFNM", u32 version, u32 header length + JSON header (kind, n_b,
// config echo), then an embedded "CFNN" parameter stream.

void save_model(const std::filesystem::path& path, const NnPredictor& model);
NnPredictor load_model(const std::filesystem::path& path);

}  // namespace chanforecast::pred
