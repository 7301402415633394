// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "mhstn/variables.hpp"

namespace mhstn {

using Timestamp = std::chrono::sys_time<std::chrono::hours>;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Accepts "YYYY-MM-DDTHH[:MM[:SS]]" (or a space separator); minutes and
// seconds must be zero.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);
int hour_of_day(Timestamp ts);

// Aligned hourly observations for V stations plus one shared NWP stream.
// Immutable once built: missing observations are already filled and vx/vy
// are derived from (v, theta).
class WeatherFrame {
 public:
  // obs is [T x 7 x V], nwp is [T x 7]; both indexed by Variable.
  WeatherFrame(std::vector<Timestamp> timeline, std::vector<std::string> stations,
               std::vector<double> obs, std::vector<double> nwp);

  std::size_t length() const noexcept { return timeline_.size(); }
  std::size_t station_count() const noexcept { return stations_.size(); }
  const std::vector<Timestamp>& timeline() const noexcept { return timeline_; }
  const std::vector<std::string>& stations() const noexcept { return stations_; }
  std::size_t station_index(std::string_view id) const;

  double obs(std::size_t t, Variable var, std::size_t station) const {
    return obs_[(t * kVariableCount + index_of(var)) * stations_.size() + station];
  }
  double nwp(std::size_t t, Variable var) const { return nwp_[t * kVariableCount + index_of(var)]; }
  std::vector<double> obs_series(Variable var, std::size_t station) const;
  std::vector<double> nwp_series(Variable var) const;
  int hour(std::size_t t) const { return hour_of_day(timeline_[t]); }

 private:
  std::vector<Timestamp> timeline_;
  std::vector<std::string> stations_;
  std::vector<double> obs_;
  std::vector<double> nwp_;
};

// Raw station record before cleaning; NaN marks a missing field.
struct ObservationRow {
  Timestamp time;
  std::string station;
  double v = kMissing;
  double theta = kMissing;
  double tp = kMissing;
  double rh = kMissing;
  double slp = kMissing;
};

struct NwpRow {
  Timestamp time;
  std::array<double, kVariableCount> values{};
};

std::vector<ObservationRow> read_observations(const std::filesystem::path& path);
std::vector<NwpRow> read_nwp(const std::filesystem::path& path);

// Aligns observations onto the NWP timeline, fills gaps, derives vx/vy.
// Stations keep their order of first appearance.
WeatherFrame build_frame(const std::vector<ObservationRow>& obs, const std::vector<NwpRow>& nwp);
WeatherFrame load_frame(const std::filesystem::path& obs_path, const std::filesystem::path& nwp_path);

void write_observations(const std::filesystem::path& path, const WeatherFrame& frame);
void write_nwp(const std::filesystem::path& path, const WeatherFrame& frame);

}  // namespace mhstn
