// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "mhstn/layers.hpp"

namespace mhstn {

// N x V map: channel i holds station i's temporal representation.
struct FeatureMap {
  Tensor values;  // [N x V]
  std::vector<std::string> stations;
};

FeatureMap build_feature_map(std::span<const std::vector<double>> representations,
                             std::vector<std::string> stations);

// Batched, differentiable form: V tensors [batch x N] -> [batch x N x V].
Var stack_feature_maps(std::span<const Var> representations);

struct SpatialShape {
  std::size_t representation = 0;  // N
  std::size_t stations = 1;        // V
  std::size_t horizon = 24;        // K
  std::size_t filters = 64;
  std::size_t kernel = 5;
  std::size_t pool = 2;

  std::size_t conv_length() const noexcept { return representation - kernel + 1; }
  std::size_t pooled_length() const noexcept { return conv_length() / pool; }
  std::size_t flat_size() const noexcept { return pooled_length() * filters; }
};

// conv1d (relu, valid) -> maxpool -> flatten -> linear K.
class SpatialNet {
 public:
  SpatialNet(const SpatialShape& shape, Rng& rng);

  // [batch x N x V] -> [batch x K]
  Var forward(const Var& feature_map) const;
  Var forward(const FeatureMap& map) const;

  const SpatialShape& shape() const noexcept { return shape_; }
  std::vector<NamedParam> parameters() const;

 private:
  SpatialShape shape_;
  Var filters_;
  Var bias_;
  DenseLayer out_;
};

}  // namespace mhstn
