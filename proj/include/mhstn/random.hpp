// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "mhstn/tensor.hpp"

namespace mhstn {

using Rng = std::mt19937_64;

// Expands a root seed into an independent per-job seed, e.g.
// derive_seed(root, {target, station, stage}).
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// Uniform in [-limit, limit] with limit = sqrt(6 / (fan_in + fan_out)).
Tensor glorot_uniform(Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng);

}  // namespace mhstn
