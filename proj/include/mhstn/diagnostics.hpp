// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mhstn/frame.hpp"

namespace mhstn {

struct Correlation {
  double value = 0.0;
  bool degenerate = false;  // a constant input; value reported as 0
};

Correlation pearson(std::span<const double> a, std::span<const double> b);
// corr(leader[t], follower[t + lag]) over the overlapping range.
Correlation lagged_correlation(std::span<const double> leader, std::span<const double> follower,
                               std::size_t lag);
std::vector<Correlation> autocorrelation(std::span<const double> series, std::size_t max_lag);

struct CorrelationCurve {
  std::string kind;    // auto | cross | spatial
  std::string series;  // label of the partner series
  std::vector<Correlation> by_lag;
};

// For `variable` at `station`: autocorrelation; cross-correlation against
// every other observed variable and the NWP forecast of the same variable;
// spatial correlation against the same variable at every other station.
// Partners lead the target by `lag` hours.
std::vector<CorrelationCurve> correlation_diagnostics(const WeatherFrame& frame, Variable variable,
                                                      std::size_t max_lag,
                                                      std::size_t station = 0);

void write_diagnostics(const std::filesystem::path& path, const std::vector<CorrelationCurve>& curves);

}  // namespace mhstn
