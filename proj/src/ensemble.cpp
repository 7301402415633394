// SPDX-License-Identifier: Apache-2.0
#include "mhstn/ensemble.hpp"

#include "mhstn/errors.hpp"

namespace mhstn {

EnsembleNet::EnsembleNet(std::size_t horizon) : horizon_(horizon) {
  if (horizon < 1) throw ArgumentError("ensemble: K must be at least 1");
  const double w = 1.0 / (2.0 * static_cast<double>(horizon));
  local_weights_ = parameter(Tensor({horizon, horizon}, w));
  spatial_weights_ = parameter(Tensor({horizon, horizon}, w));
}

Var EnsembleNet::forward(const Var& local, const Var& spatial) const {
  if (local->value.rank() != 2 || spatial->value.rank() != 2 ||
      local->value.dim(1) != horizon_ || spatial->value.dim(1) != horizon_ ||
      local->value.dim(0) != spatial->value.dim(0)) {
    throw DimensionError("ensemble: inputs " + shape_string(local->value.shape()) + " and " +
                         shape_string(spatial->value.shape()) + " expected [batch x " +
                         std::to_string(horizon_) + "]");
  }
  return add(dense(local, local_weights_, nullptr, Activation::linear),
             dense(spatial, spatial_weights_, nullptr, Activation::linear));
}

std::vector<NamedParam> EnsembleNet::parameters() const {
  return {{"local_weights", local_weights_}, {"spatial_weights", spatial_weights_}};
}

}  // namespace mhstn
