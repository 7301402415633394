// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mhstn/autodiff.hpp"
#include "mhstn/random.hpp"

namespace mhstn {

struct NamedParam {
  std::string name;
  Var var;
};

std::vector<Var> vars_of(const std::vector<NamedParam>& params);

struct DenseLayer {
  Var weights;  // [in x out]
  Var bias;     // [out], may be null
  Activation activation = Activation::linear;

  static DenseLayer glorot(std::size_t in, std::size_t out, Activation activation, Rng& rng,
                           bool with_bias = true);

  Var operator()(const Var& input) const { return dense(input, weights, bias, activation); }
  std::size_t in_size() const { return weights->value.dim(0); }
  std::size_t out_size() const { return weights->value.dim(1); }
  void append_params(const std::string& prefix, std::vector<NamedParam>& out) const;
};

// Glorot-uniform kernels, zero biases except a unit forget-gate bias.
LstmParams init_lstm(std::size_t features, std::size_t hidden, Rng& rng);
void append_params(const std::string& prefix, const LstmParams& lstm, std::vector<NamedParam>& out);

}  // namespace mhstn
