// SPDX-License-Identifier: Apache-2.0
#include "mhstn/layers.hpp"

namespace mhstn {

std::vector<Var> vars_of(const std::vector<NamedParam>& params) {
  std::vector<Var> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.var);
  return out;
}

DenseLayer DenseLayer::glorot(std::size_t in, std::size_t out, Activation activation, Rng& rng,
                              bool with_bias) {
  DenseLayer layer;
  layer.weights = parameter(glorot_uniform({in, out}, in, out, rng));
  if (with_bias) layer.bias = parameter(Tensor({out}));
  layer.activation = activation;
  return layer;
}

void DenseLayer::append_params(const std::string& prefix, std::vector<NamedParam>& out) const {
  out.push_back({prefix + ".weights", weights});
  if (bias) out.push_back({prefix + ".bias", bias});
}

LstmParams init_lstm(std::size_t features, std::size_t hidden, Rng& rng) {
  LstmParams p;
  p.input_weights = parameter(glorot_uniform({features, 4 * hidden}, features, 4 * hidden, rng));
  p.recurrent_weights = parameter(glorot_uniform({hidden, 4 * hidden}, hidden, 4 * hidden, rng));
  Tensor bias({4 * hidden});
  for (std::size_t j = hidden; j < 2 * hidden; ++j) bias[j] = 1.0;
  p.bias = parameter(std::move(bias));
  return p;
}

void append_params(const std::string& prefix, const LstmParams& lstm, std::vector<NamedParam>& out) {
  out.push_back({prefix + ".input_weights", lstm.input_weights});
  out.push_back({prefix + ".recurrent_weights", lstm.recurrent_weights});
  out.push_back({prefix + ".bias", lstm.bias});
}

}  // namespace mhstn
