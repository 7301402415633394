// SPDX-License-Identifier: Apache-2.0
#include "mhstn/windows.hpp"

#include <algorithm>
#include <string>

#include "mhstn/errors.hpp"

namespace mhstn {

std::vector<std::size_t> forecast_origins(const WeatherFrame& frame, const WindowSpec& spec) {
  if (spec.history == 0 || spec.horizon == 0) throw ArgumentError("W and K must be positive");
  if (spec.fct_hour < 0 || spec.fct_hour > 23) throw ArgumentError("fct_hour must be in [0, 23]");
  std::vector<std::size_t> out;
  const int origin_hour = (spec.fct_hour + 23) % 24;
  const std::size_t T = frame.length();
  for (std::size_t t = spec.history - 1; t + spec.horizon < T; ++t) {
    if (frame.hour(t) == origin_hour) out.push_back(t);
  }
  return out;
}

SampleWindow make_window(const WeatherFrame& frame, std::size_t station, const WindowSpec& spec,
                         std::size_t fct) {
  if (station >= frame.station_count()) throw ArgumentError("station index out of range");
  if (fct + 1 < spec.history || fct + spec.horizon >= frame.length()) {
    throw ArgumentError("window at index " + std::to_string(fct) + " exceeds the frame");
  }
  if (std::find(spec.history_covariates.begin(), spec.history_covariates.end(), spec.target) !=
          spec.history_covariates.end() ||
      std::find(spec.future_covariates.begin(), spec.future_covariates.end(), spec.target) !=
          spec.future_covariates.end()) {
    throw ArgumentError("covariate lists must not repeat the target");
  }
  SampleWindow w;
  w.fct = fct;
  w.station = station;
  const std::size_t first = fct + 1 - spec.history;
  w.history.reserve(spec.history * spec.history_width());
  for (std::size_t t = first; t <= fct; ++t) {
    w.history.push_back(frame.obs(t, spec.target, station));
    for (auto var : spec.history_covariates) w.history.push_back(frame.obs(t, var, station));
  }
  w.future.reserve(spec.horizon * spec.future_width());
  for (std::size_t t = fct + 1; t <= fct + spec.horizon; ++t) {
    w.future.push_back(frame.nwp(t, spec.target));
    for (auto var : spec.future_covariates) w.future.push_back(frame.nwp(t, var));
    w.target.push_back(frame.obs(t, spec.target, station));
  }
  return w;
}

std::vector<SampleWindow> make_windows(const WeatherFrame& frame, std::size_t station,
                                       const WindowSpec& spec) {
  std::vector<SampleWindow> out;
  for (auto t : forecast_origins(frame, spec)) out.push_back(make_window(frame, station, spec, t));
  return out;
}

}  // namespace mhstn
