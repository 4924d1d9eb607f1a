// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "chanforecast/numerics.hpp"
#include "chanforecast/rng.hpp"

namespace chanforecast::nn {

enum class InitKind {
  UniformFanIn,       // U(-1/sqrt(fan_in), +1/sqrt(fan_in)), fan_in = cols
  Zero,               // ordinary biases
  HyperOutputWeight,  // 0.01 * UniformFanIn: adjuster output layers start near zero
  One,                // adjuster output biases start at the multiplicative identity
};

// Named real tensors with matching gradient buffers. Shapes are fixed at add()
// time; vectors are stored as n x 1. Iteration follows insertion order, which
// also fixes initialization, checkpoint and flattening order.
class ParamStore {
 public:
  struct Entry {
    std::string name;
    RMat value;
    RMat grad;
    InitKind init;
  };

  std::size_t add(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                  InitKind init);

  bool has(const std::string& name) const;
  RMat& value(const std::string& name);
  const RMat& value(const std::string& name) const;
  RMat& grad(const std::string& name);
  const RMat& grad(const std::string& name) const;

  std::size_t tensor_count() const { return entries_.size(); }
  std::size_t total_count() const;

  void zero_grads();
  RVec to_flat() const;
  void from_flat(const RVec& flat);
  RVec grads_to_flat() const;

  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  const Entry& at(const std::string& name) const;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Fills every tensor according to its InitKind; draw order is entry order,
// row-major within a tensor, so equal seeds give identical stores.
void init_params(ParamStore& store, Rng& rng);

// ---------------------------------------------------------------------------
// LSTM cell. Parameters under a prefix: ".W_x" (4H x I), ".W_h" (4H x H),
// ".b" (4H x 1), gate rows stacked [input; forget; candidate; output].
// ---------------------------------------------------------------------------

struct LstmState {
  RVec c;  // cell state
  RVec z;  // hidden state, tanh-bounded
};

void add_lstm_params(ParamStore& store, const std::string& prefix, int input_size,
                     int hidden_size);

LstmState lstm_step(const LstmState& state, const RVec& x, const ParamStore& params,
                    const std::string& prefix = "lstm");

// Batched sequence forward from the zero state over columns of xs[t] (I x B).
// Returns the final hidden state (H x B); fills the cache for the backward pass.
struct LstmCache {
  std::vector<RMat> x;                  // per-step inputs
  std::vector<RMat> gi, gf, gg, go;     // post-activation gates
  std::vector<RMat> c, tanh_c, z;       // per-step states
};

RMat lstm_forward(std::span<const RMat> xs, const ParamStore& params,
                  const std::string& prefix, LstmCache* cache);

// Backpropagates a gradient w.r.t. the final hidden state through the whole
// unrolled sequence (no truncation), accumulating into params' grad buffers.
void lstm_backward(const LstmCache& cache, const RMat& d_z_last, ParamStore& params,
                   const std::string& prefix);

// ---------------------------------------------------------------------------
// Two-layer perceptron y = W2 * relu(W1 x + b1) + b2, no output activation.
// Parameters under a prefix: ".W1", ".b1", ".W2", ".b2".
// ---------------------------------------------------------------------------

void add_mlp2_params(ParamStore& store, const std::string& prefix, int input_size,
                     int hidden_size, int output_size, bool hyper_output);

RVec mlp2_forward(const RVec& x, const ParamStore& params, const std::string& prefix);

RMat mlp2_forward_batch(const RMat& x, const ParamStore& params,
                        const std::string& prefix, RMat* hidden_cache);

void mlp2_backward_batch(const RMat& x, const RMat& hidden_cache, const RMat& d_out,
                         ParamStore& params, const std::string& prefix);

double relu(double x);

// ---------------------------------------------------------------------------
// ADAM with bias-corrected moments.
// ---------------------------------------------------------------------------

struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<RMat> m;  // first moments, lazily shaped from the store
  std::vector<RMat> v;  // second moments

  void reset();
};

// Applies one update in-place from the store's gradient buffers.
// Throws std::domain_error on non-finite gradient entries.
void adam_update(ParamStore& params, AdamState& opt);

}  // namespace chanforecast::nn
