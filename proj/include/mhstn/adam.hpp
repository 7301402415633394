// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mhstn/autodiff.hpp"

namespace mhstn {

struct AdamState {
  std::uint64_t step = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

// Bias-corrected Adam:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
class Adam {
 public:
  explicit Adam(std::vector<Var> params, double learning_rate = 1e-3);

  void step();
  void zero_grad();

  double learning_rate() const noexcept { return state_.learning_rate; }
  void set_learning_rate(double lr) noexcept { state_.learning_rate = lr; }
  const AdamState& state() const noexcept { return state_; }
  std::span<const Var> params() const noexcept { return params_; }

 private:
  std::vector<Var> params_;
  AdamState state_;
};

}  // namespace mhstn
