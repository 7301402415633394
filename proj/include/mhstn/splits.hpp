// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mhstn/frame.hpp"
#include "mhstn/windows.hpp"

namespace mhstn {

enum class SplitMode { rolling, incremental };

SplitMode parse_split_mode(std::string_view name);
std::string_view split_mode_name(SplitMode mode) noexcept;

// Interval ids are 0-based positions in the interval list.
struct Fold {
  std::vector<std::size_t> train;
  std::size_t validation = 0;
  std::size_t test = 0;
};

struct SplitPlan {
  SplitMode mode = SplitMode::incremental;
  std::size_t n_intervals = 0;
  std::vector<Fold> folds;
};

// Tests slide over the last n_folds intervals; each fold validates on the
// interval just before its test interval. Rolling trains on the
// history_intervals preceding the test interval minus the validation one;
// incremental trains on everything before the validation interval.
SplitPlan plan_splits(std::size_t n_intervals, SplitMode mode, std::size_t n_folds = 12,
                      std::size_t history_intervals = 6);

// Half-open range of timeline indices.
struct HourRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(std::size_t t) const noexcept { return t >= begin && t < end; }
  friend bool operator==(const HourRange&, const HourRange&) = default;
};

// Complete calendar months of whole days; partial months at the frame edges
// are dropped.
std::vector<HourRange> month_intervals(const WeatherFrame& frame);
// Consecutive blocks of whole days.
std::vector<HourRange> day_intervals(const WeatherFrame& frame, std::size_t days_per_interval);

// Union of consecutive intervals.
HourRange span_of(const std::vector<HourRange>& intervals, const std::vector<std::size_t>& ids);
HourRange train_span(const std::vector<HourRange>& intervals, const Fold& fold);

// Window creation indices per role. A window is kept only when its whole
// extent [fct-W+1, fct+K] lies inside one role's span.
struct FoldWindows {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

bool window_within(std::size_t fct, const WindowSpec& spec, const HourRange& range) noexcept;
FoldWindows assign_windows(const std::vector<std::size_t>& origins, const WindowSpec& spec,
                           const std::vector<HourRange>& intervals, const Fold& fold);

}  // namespace mhstn
