// SPDX-License-Identifier: Apache-2.0
#include "mhstn/adam.hpp"

#include <cmath>

#include "mhstn/errors.hpp"

namespace mhstn {

Adam::Adam(std::vector<Var> params, double learning_rate) : params_(std::move(params)) {
  state_.learning_rate = learning_rate;
  for (const auto& p : params_) {
    state_.first_moment.emplace_back(p->value.size(), 0.0);
    state_.second_moment.emplace_back(p->value.size(), 0.0);
  }
}

void Adam::step() {
  for (const auto& p : params_) {
    if (!p->value.has_grad()) throw StateError("adam: parameter has no gradient");
  }
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double c1 = 1.0 - std::pow(state_.beta1, t);
  const double c2 = 1.0 - std::pow(state_.beta2, t);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto values = params_[k]->value.values();
    const auto grad = params_[k]->value.grad();
    auto& m = state_.first_moment[k];
    auto& v = state_.second_moment[k];
    for (std::size_t i = 0; i < values.size(); ++i) {
      m[i] = state_.beta1 * m[i] + (1.0 - state_.beta1) * grad[i];
      v[i] = state_.beta2 * v[i] + (1.0 - state_.beta2) * grad[i] * grad[i];
      values[i] -= state_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + state_.epsilon);
    }
  }
}

void Adam::zero_grad() {
  for (const auto& p : params_) p->value.ensure_grad(), p->value.zero_grad();
}

}  // namespace mhstn
