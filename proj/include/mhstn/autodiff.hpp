// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "mhstn/tensor.hpp"

namespace mhstn {

// A node of the recorded computation. Leaves are either constants or
// trainable parameters; interior nodes carry a closure that pushes their
// gradient to their inputs.
struct Node {
  Tensor value;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backward_fn;

  bool is_leaf() const noexcept { return !backward_fn; }
};

using Var = std::shared_ptr<Node>;

Var constant(Tensor value);
Var parameter(Tensor value);

// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled() noexcept;

enum class Activation { linear, relu, sigmoid, tanh };

// input [batch x in] * weights [in x out] + bias [out], then activation.
Var dense(const Var& input, const Var& weights, const Var& bias, Activation activation);

Var add(const Var& a, const Var& b);
// [batch x a] ++ [batch x b] -> [batch x (a+b)]
Var concat_features(const Var& a, const Var& b);
// Columns [begin, begin+count) of a [batch x n] tensor.
Var slice_features(const Var& input, std::size_t begin, std::size_t count);
// Step t of a [batch x steps x features] tensor.
Var time_step(const Var& sequence, std::size_t t);
// [batch x ...] -> [batch x prod(...)]
Var flatten(const Var& input);
// V tensors of [batch x n] -> [batch x n x V] (channel i = input i).
Var stack_channels(std::span<const Var> inputs);

struct LstmParams {
  Var input_weights;      // [features x 4H], gate blocks ordered i, f, g, o
  Var recurrent_weights;  // [H x 4H]
  Var bias;               // [4H]

  std::size_t hidden_size() const;
  std::size_t input_size() const;
};

struct LstmState {
  Var h;
  Var c;
};

LstmState lstm_cell(const Var& x, const Var& h_prev, const Var& c_prev, const LstmParams& params);
// Runs the cell over [batch x steps x features] from zero state and returns
// the hidden state of the last step.
Var lstm_forward(const Var& sequence, const LstmParams& params);

// input [batch x length x channels], filters [kernel x channels x filters],
// bias [filters]; valid padding, stride 1.
Var conv1d(const Var& input, const Var& filters, const Var& bias, Activation activation);
// [batch x length x features] -> [batch x length/pool x features]; a trailing
// partial window is dropped.
Var maxpool1d(const Var& input, std::size_t pool = 2);

Var mse_loss(const Var& truth, const Var& pred);

// Reverse pass from a scalar loss. Leaf gradients accumulate across calls;
// interior gradients are recomputed each call.
void backward(const Var& loss);

void zero_grad(std::span<const Var> params);

}  // namespace mhstn
