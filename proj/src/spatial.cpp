// SPDX-License-Identifier: Apache-2.0
#include "mhstn/spatial.hpp"

#include "mhstn/errors.hpp"

namespace mhstn {

FeatureMap build_feature_map(std::span<const std::vector<double>> representations,
                             std::vector<std::string> stations) {
  if (representations.empty()) throw ArgumentError("feature map: no stations");
  if (stations.size() != representations.size()) {
    throw DimensionError("feature map: station ids do not match representation count");
  }
  const std::size_t n = representations.front().size();
  const std::size_t v = representations.size();
  FeatureMap map{Tensor({n, v}), std::move(stations)};
  for (std::size_t c = 0; c < v; ++c) {
    if (representations[c].size() != n) {
      throw DimensionError("feature map: representation " + std::to_string(c) + " has length " +
                           std::to_string(representations[c].size()) + ", expected " +
                           std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) map.values[i * v + c] = representations[c][i];
  }
  return map;
}

Var stack_feature_maps(std::span<const Var> representations) {
  return stack_channels(representations);
}

SpatialNet::SpatialNet(const SpatialShape& shape, Rng& rng) : shape_(shape) {
  if (shape.stations == 0 || shape.filters == 0 || shape.kernel == 0 || shape.pool == 0 ||
      shape.horizon == 0) {
    throw ArgumentError("spatial net: sizes must be positive");
  }
  if (shape.representation < shape.kernel) {
    throw ArgumentError("spatial net: representation length " +
                        std::to_string(shape.representation) + " shorter than kernel " +
                        std::to_string(shape.kernel));
  }
  if (shape.pooled_length() == 0) throw ArgumentError("spatial net: nothing left after pooling");
  filters_ = parameter(glorot_uniform({shape.kernel, shape.stations, shape.filters},
                                      shape.kernel * shape.stations, shape.kernel * shape.filters,
                                      rng));
  bias_ = parameter(Tensor({shape.filters}));
  out_ = DenseLayer::glorot(shape.flat_size(), shape.horizon, Activation::linear, rng);
}

Var SpatialNet::forward(const Var& feature_map) const {
  const auto& s = feature_map->value.shape();
  if (s.size() != 3 || s[2] != shape_.stations) {
    throw DimensionError("spatial: feature map " + shape_string(s) + " expected [batch x N x " +
                         std::to_string(shape_.stations) + "]");
  }
  if (s[1] < shape_.kernel) {
    throw ArgumentError("spatial: representation length " + std::to_string(s[1]) +
                        " shorter than kernel " + std::to_string(shape_.kernel));
  }
  if (s[1] != shape_.representation) {
    throw DimensionError("spatial: representation length " + std::to_string(s[1]) +
                         " expected " + std::to_string(shape_.representation));
  }
  Var conv = conv1d(feature_map, filters_, bias_, Activation::relu);
  return out_(flatten(maxpool1d(conv, shape_.pool)));
}

Var SpatialNet::forward(const FeatureMap& map) const {
  const std::size_t n = map.values.dim(0);
  const std::size_t v = map.values.dim(1);
  return forward(constant(map.values.reshaped({1, n, v})));
}

std::vector<NamedParam> SpatialNet::parameters() const {
  std::vector<NamedParam> out{{"conv.filters", filters_}, {"conv.bias", bias_}};
  out_.append_params("out", out);
  return out;
}

}  // namespace mhstn
