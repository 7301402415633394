// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mhstn/layers.hpp"

namespace mhstn {

// Bias-free blend y_j = sum_i Wl[i][j] yl_i + sum_i Ws[i][j] ys_i.
class EnsembleNet {
 public:
  // Every weight starts at 1 / (2K).
  explicit EnsembleNet(std::size_t horizon);

  // [batch x K], [batch x K] -> [batch x K]
  Var forward(const Var& local, const Var& spatial) const;

  std::size_t horizon() const noexcept { return horizon_; }
  const Var& local_weights() const noexcept { return local_weights_; }
  const Var& spatial_weights() const noexcept { return spatial_weights_; }
  std::vector<NamedParam> parameters() const;

 private:
  std::size_t horizon_;
  Var local_weights_;
  Var spatial_weights_;
};

}  // namespace mhstn
