// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mhstn/layers.hpp"

namespace mhstn {

struct TemporalShape {
  std::size_t history_steps = 24;  // W
  std::size_t history_width = 1;   // target + selected historical covariates
  std::size_t horizon = 24;        // K
  std::size_t future_width = 1;    // NWP target + selected covariates; 0 = history only
  std::size_t lstm_hidden = 32;
  std::size_t history_expansion = 2;  // MLP(h) units per LSTM unit
  std::size_t future_expansion = 2;   // MLP(f) units per flattened NWP value

  bool uses_future() const noexcept { return future_width > 0; }
  std::size_t history_code_size() const noexcept { return history_expansion * lstm_hidden; }
  std::size_t future_code_size() const noexcept {
    return future_expansion * horizon * future_width;
  }
  std::size_t representation_size() const noexcept {
    return history_code_size() + future_code_size();
  }
};

struct TemporalOutput {
  Var predictions;     // [batch x K]
  Var representation;  // [batch x N], hidden layer of the combiner
};

// Per-station encoder-decoder: LSTM + relu MLP over the observed history,
// relu MLP over the flattened NWP block, and a relu hidden layer of the
// concatenated size feeding a linear K-output layer.
class TemporalNet {
 public:
  TemporalNet(const TemporalShape& shape, Rng& rng);

  // [batch x W x history_width] -> [batch x 2H]
  Var encode_history(const Var& history) const;
  // [batch x K*future_width] -> [batch x future_code_size]
  Var encode_future(const Var& future) const;
  // `future` is ignored (may be null) for a history-only net.
  TemporalOutput forward(const Var& history, const Var& future) const;

  const TemporalShape& shape() const noexcept { return shape_; }
  std::size_t representation_size() const noexcept { return shape_.representation_size(); }
  std::vector<NamedParam> parameters() const;

 private:
  TemporalShape shape_;
  LstmParams lstm_;
  DenseLayer history_mlp_;
  DenseLayer future_mlp_;
  DenseLayer combine_hidden_;
  DenseLayer combine_out_;
};

}  // namespace mhstn
