// SPDX-License-Identifier: Apache-2.0
#include "mhstn/temporal.hpp"

#include "mhstn/errors.hpp"

namespace mhstn {

TemporalNet::TemporalNet(const TemporalShape& shape, Rng& rng) : shape_(shape) {
  if (shape.history_steps == 0 || shape.history_width == 0 || shape.horizon == 0 ||
      shape.lstm_hidden == 0) {
    throw ArgumentError("temporal net: sizes must be positive");
  }
  lstm_ = init_lstm(shape.history_width, shape.lstm_hidden, rng);
  history_mlp_ = DenseLayer::glorot(shape.lstm_hidden, shape.history_code_size(), Activation::relu, rng);
  if (shape.uses_future()) {
    future_mlp_ = DenseLayer::glorot(shape.horizon * shape.future_width, shape.future_code_size(),
                                     Activation::relu, rng);
  }
  const std::size_t n = shape.representation_size();
  combine_hidden_ = DenseLayer::glorot(n, n, Activation::relu, rng);
  combine_out_ = DenseLayer::glorot(n, shape.horizon, Activation::linear, rng);
}

Var TemporalNet::encode_history(const Var& history) const {
  const auto& s = history->value.shape();
  if (s.size() != 3 || s[1] != shape_.history_steps || s[2] != shape_.history_width) {
    throw DimensionError("temporal: history " + shape_string(s) + " expected [batch x " +
                         std::to_string(shape_.history_steps) + " x " +
                         std::to_string(shape_.history_width) + "]");
  }
  return history_mlp_(lstm_forward(history, lstm_));
}

Var TemporalNet::encode_future(const Var& future) const {
  if (!shape_.uses_future()) throw StateError("temporal: net has no future encoder");
  const auto& s = future->value.shape();
  if (s.size() != 2 || s[1] != shape_.horizon * shape_.future_width) {
    throw DimensionError("temporal: future " + shape_string(s) + " expected [batch x " +
                         std::to_string(shape_.horizon * shape_.future_width) + "]");
  }
  return future_mlp_(future);
}

TemporalOutput TemporalNet::forward(const Var& history, const Var& future) const {
  Var code = encode_history(history);
  if (shape_.uses_future()) {
    Var f = encode_future(future);
    if (f->value.dim(0) != code->value.dim(0)) throw DimensionError("temporal: batch sizes differ");
    code = concat_features(code, f);
  }
  Var representation = combine_hidden_(code);
  return {combine_out_(representation), representation};
}

std::vector<NamedParam> TemporalNet::parameters() const {
  std::vector<NamedParam> out;
  append_params("lstm", lstm_, out);
  history_mlp_.append_params("history_mlp", out);
  if (shape_.uses_future()) future_mlp_.append_params("future_mlp", out);
  combine_hidden_.append_params("combine_hidden", out);
  combine_out_.append_params("combine_out", out);
  return out;
}

}  // namespace mhstn
