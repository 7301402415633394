// SPDX-License-Identifier: Apache-2.0
#include "mhstn/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mhstn/errors.hpp"
#include "mhstn/random.hpp"
#include "mhstn/wind.hpp"

namespace mhstn {

void SynthSpec::validate() const {
  if (stations < 1) throw ArgumentError("synth: at least one station");
  if (days < 3) throw ArgumentError("synth: at least 3 days");
  if (!(ar_coefficient > -1.0 && ar_coefficient < 1.0)) throw ArgumentError("synth: AR coefficient outside (-1, 1)");
  for (double x : {noise_scale, regional_noise, nwp_noise, direction_noise, station_offset}) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ArgumentError("synth: noise scales must be finite and >= 0");
  }
  if (!std::isfinite(base_speed) || !std::isfinite(diurnal_amplitude) || !std::isfinite(nwp_bias) ||
      !std::isfinite(spatial_strength)) {
    throw ArgumentError("synth: non-finite parameter");
  }
  parse_timestamp(start);
}

WeatherFrame synthesize(const SynthSpec& spec) {
  spec.validate();
  const std::size_t V = spec.stations;
  const std::size_t T = spec.days * 24;
  const Timestamp t0 = parse_timestamp(spec.start);
  std::vector<Timestamp> timeline(T);
  for (std::size_t t = 0; t < T; ++t) timeline[t] = t0 + std::chrono::hours(t);
  std::vector<std::string> stations(V);
  for (std::size_t s = 0; s < V; ++s) stations[s] = "S" + std::to_string(s + 1);

  std::normal_distribution<double> normal(0.0, 1.0);
  Rng regional_rng(derive_seed(spec.seed, {0}));
  Rng nwp_rng(derive_seed(spec.seed, {1}));
  std::vector<Rng> station_rng;
  for (std::size_t s = 0; s < V; ++s) station_rng.emplace_back(derive_seed(spec.seed, {2, s}));

  std::vector<double> offset(V, 0.0);
  if (V > 1) {
    for (std::size_t s = 0; s < V; ++s)
      offset[s] = spec.station_offset * (2.0 * static_cast<double>(s) / static_cast<double>(V - 1) - 1.0);
  }

  std::vector<double> obs(T * kVariableCount * V);
  std::vector<double> nwp(T * kVariableCount);
  auto O = [&](std::size_t t, Variable var, std::size_t s) -> double& {
    return obs[(t * kVariableCount + index_of(var)) * V + s];
  };
  auto N = [&](std::size_t t, Variable var) -> double& { return nwp[t * kVariableCount + index_of(var)]; };

  const double phi = spec.ar_coefficient;
  double regional = 0.0, pressure = 0.0, angle_drift = 0.0;
  std::vector<double> station_ar(V, 0.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (std::size_t t = 0; t < T; ++t) {
    const double h = static_cast<double>(hour_of_day(timeline[t]));
    regional = phi * regional + spec.regional_noise * normal(regional_rng);
    pressure = 0.97 * pressure + 0.5 * normal(regional_rng);
    angle_drift = 0.95 * angle_drift + 8.0 * normal(regional_rng);
    const double diurnal = std::sin(kTwoPi * (h - 9.0) / 24.0);
    const double clean = spec.base_speed + spec.diurnal_amplitude * diurnal + spec.spatial_strength * regional;
    const double heading = 200.0 + 60.0 * std::sin(kTwoPi * static_cast<double>(t) / (24.0 * 7.0)) + angle_drift;
    const double tp = 12.0 + 6.0 * std::sin(kTwoPi * (h - 15.0) / 24.0);
    const double slp = 1013.0 + pressure;

    const double nv = std::max(0.0, clean + spec.nwp_bias + spec.nwp_noise * normal(nwp_rng));
    const double ntheta = canonical_direction(heading + spec.direction_noise * 0.5 * normal(nwp_rng));
    const auto nw = decompose_wind(nv, ntheta);
    N(t, Variable::v) = nv;
    N(t, Variable::theta) = ntheta;
    N(t, Variable::vx) = nw.vx;
    N(t, Variable::vy) = nw.vy;
    N(t, Variable::tp) = tp + 0.5 * normal(nwp_rng);
    N(t, Variable::rh) = 70.0 - 2.0 * (tp - 12.0) + 2.0 * normal(nwp_rng);
    N(t, Variable::slp) = slp + 0.3 * normal(nwp_rng);

    for (std::size_t s = 0; s < V; ++s) {
      Rng& rng = station_rng[s];
      station_ar[s] = phi * station_ar[s] + spec.noise_scale * normal(rng);
      const double v = std::max(0.0, clean + station_ar[s] - offset[s]);
      const double theta = canonical_direction(heading + spec.direction_noise * normal(rng));
      const auto w = decompose_wind(v, theta);
      O(t, Variable::v, s) = v;
      O(t, Variable::theta, s) = theta;
      O(t, Variable::vx, s) = w.vx;
      O(t, Variable::vy, s) = w.vy;
      O(t, Variable::tp, s) = tp + 0.3 * static_cast<double>(s) + 0.4 * normal(rng);
      O(t, Variable::rh, s) = 70.0 - 2.0 * (tp - 12.0) + 1.5 * normal(rng);
      O(t, Variable::slp, s) = slp - 0.1 * static_cast<double>(s) + 0.1 * normal(rng);
    }
  }
  return WeatherFrame(std::move(timeline), std::move(stations), std::move(obs), std::move(nwp));
}

void write_synth(const std::filesystem::path& dir, const SynthSpec& spec) {
  const WeatherFrame frame = synthesize(spec);
  std::filesystem::create_directories(dir);
  write_observations(dir / "observations.csv", frame);
  write_nwp(dir / "nwp.csv", frame);
}

}  // namespace mhstn
