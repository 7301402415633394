// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mhstn/frame.hpp"

namespace mhstn {

// Generator for desk-scale fixtures. Station speed is
//   base + amplitude * diurnal(h) + spatial_strength * r_t + e_{s,t} - offset_s
// with a shared regional AR(1) r and per-station AR(1) e. The NWP stream
// sees the clean regional part plus nwp_bias and white noise.
struct SynthSpec {
  std::size_t stations = 3;
  std::size_t days = 30;
  std::string start = "2018-03-01T00:00:00";
  double base_speed = 5.0;
  double diurnal_amplitude = 2.0;
  double ar_coefficient = 0.8;
  double noise_scale = 0.3;      // station AR(1) innovation
  double regional_noise = 0.4;   // regional AR(1) innovation
  double spatial_strength = 1.0;
  double nwp_bias = 1.0;
  double station_offset = 0.0;   // spread of per-station offsets the NWP cannot see
  double nwp_noise = 0.2;
  double direction_noise = 10.0; // degrees, per station
  std::uint64_t seed = 1;

  void validate() const;
};

WeatherFrame synthesize(const SynthSpec& spec);

// Writes observations.csv and nwp.csv under dir.
void write_synth(const std::filesystem::path& dir, const SynthSpec& spec);

}  // namespace mhstn
