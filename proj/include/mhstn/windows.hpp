// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "mhstn/frame.hpp"
#include "mhstn/variables.hpp"

namespace mhstn {

struct WindowSpec {
  Variable target = Variable::v;
  std::vector<Variable> history_covariates;  // observed, target excluded
  std::vector<Variable> future_covariates;   // NWP, target excluded
  std::size_t history = 24;                  // W
  std::size_t horizon = 24;                  // K
  // Clock hour of the first forecast step. The creation index is the last
  // observation before it, so fct_hour = 0 forecasts a full calendar day.
  int fct_hour = 0;

  std::size_t history_width() const noexcept { return 1 + history_covariates.size(); }
  std::size_t future_width() const noexcept { return 1 + future_covariates.size(); }
};

// One forecast instance in original units. history covers [fct-W+1, fct],
// future and target cover [fct+1, fct+K].
struct SampleWindow {
  std::size_t fct = 0;
  std::size_t station = 0;
  std::vector<double> history;  // [W x history_width], target column first
  std::vector<double> future;   // [K x future_width], NWP target column first
  std::vector<double> target;   // [K]
};

// Creation indices whose full history and horizon lie inside the frame, in
// chronological order.
std::vector<std::size_t> forecast_origins(const WeatherFrame& frame, const WindowSpec& spec);

SampleWindow make_window(const WeatherFrame& frame, std::size_t station, const WindowSpec& spec,
                         std::size_t fct);
std::vector<SampleWindow> make_windows(const WeatherFrame& frame, std::size_t station,
                                       const WindowSpec& spec);

}  // namespace mhstn
