// SPDX-License-Identifier: Apache-2.0
#include "mhstn/splits.hpp"

#include <chrono>
#include <string>

#include "mhstn/errors.hpp"

namespace mhstn {

SplitMode parse_split_mode(std::string_view name) {
  if (name == "rolling") return SplitMode::rolling;
  if (name == "incremental") return SplitMode::incremental;
  throw ArgumentError("unknown split mode '" + std::string(name) + "'");
}

std::string_view split_mode_name(SplitMode mode) noexcept {
  return mode == SplitMode::rolling ? "rolling" : "incremental";
}

SplitPlan plan_splits(std::size_t n_intervals, SplitMode mode, std::size_t n_folds,
                      std::size_t history_intervals) {
  if (n_folds == 0) throw ArgumentError("plan_splits: need at least one fold");
  if (n_intervals < n_folds + 2) {
    throw ArgumentError("plan_splits: " + std::to_string(n_intervals) + " intervals cannot hold " +
                        std::to_string(n_folds) + " folds with train and validation intervals");
  }
  if (mode == SplitMode::rolling && history_intervals < 2) {
    throw ArgumentError("plan_splits: rolling history must span at least 2 intervals");
  }
  SplitPlan plan;
  plan.mode = mode;
  plan.n_intervals = n_intervals;
  for (std::size_t f = 0; f < n_folds; ++f) {
    Fold fold;
    fold.test = n_intervals - n_folds + f;
    fold.validation = fold.test - 1;
    std::size_t first = 0;
    if (mode == SplitMode::rolling && fold.test > history_intervals)
      first = fold.test - history_intervals;
    for (std::size_t i = first; i < fold.validation; ++i) fold.train.push_back(i);
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

namespace {

// First index at 00:00 and the number of whole days from there.
std::pair<std::size_t, std::size_t> whole_days(const WeatherFrame& frame) {
  std::size_t start = 0;
  while (start < frame.length() && frame.hour(start) != 0) ++start;
  return {start, (frame.length() - start) / 24};
}

}  // namespace

std::vector<HourRange> month_intervals(const WeatherFrame& frame) {
  using namespace std::chrono;
  const auto [start, n_days] = whole_days(frame);
  std::vector<HourRange> out;
  std::size_t d = 0;
  while (d < n_days) {
    const auto first_day = floor<days>(frame.timeline()[start + d * 24]);
    const year_month_day ymd{first_day};
    const year_month ym{ymd.year(), ymd.month()};
    const auto month_days = static_cast<std::size_t>(
        static_cast<unsigned>(year_month_day_last{ym.year(), month_day_last{ym.month()}}.day()));
    const std::size_t day_in_month = static_cast<unsigned>(ymd.day()) - 1;
    const std::size_t remaining = month_days - day_in_month;
    if (day_in_month == 0 && d + month_days <= n_days) {
      out.push_back({start + d * 24, start + (d + month_days) * 24});
    }
    d += remaining;
  }
  return out;
}

std::vector<HourRange> day_intervals(const WeatherFrame& frame, std::size_t days_per_interval) {
  if (days_per_interval == 0) throw ArgumentError("day_intervals: interval length must be positive");
  const auto [start, n_days] = whole_days(frame);
  std::vector<HourRange> out;
  for (std::size_t d = 0; d + days_per_interval <= n_days; d += days_per_interval)
    out.push_back({start + d * 24, start + (d + days_per_interval) * 24});
  return out;
}

HourRange span_of(const std::vector<HourRange>& intervals, const std::vector<std::size_t>& ids) {
  if (ids.empty()) throw ArgumentError("span_of: no intervals");
  HourRange r{intervals.at(ids.front()).begin, intervals.at(ids.front()).end};
  for (std::size_t k = 1; k < ids.size(); ++k) {
    const auto& next = intervals.at(ids[k]);
    if (next.begin != r.end) throw ArgumentError("span_of: intervals are not consecutive");
    r.end = next.end;
  }
  return r;
}

HourRange train_span(const std::vector<HourRange>& intervals, const Fold& fold) {
  return span_of(intervals, fold.train);
}

bool window_within(std::size_t fct, const WindowSpec& spec, const HourRange& range) noexcept {
  return fct + 1 >= range.begin + spec.history && fct + spec.horizon < range.end;
}

FoldWindows assign_windows(const std::vector<std::size_t>& origins, const WindowSpec& spec,
                           const std::vector<HourRange>& intervals, const Fold& fold) {
  const HourRange train = train_span(intervals, fold);
  const HourRange validation = intervals.at(fold.validation);
  const HourRange test = intervals.at(fold.test);
  FoldWindows out;
  for (auto t : origins) {
    if (window_within(t, spec, train)) out.train.push_back(t);
    else if (window_within(t, spec, validation)) out.validation.push_back(t);
    else if (window_within(t, spec, test)) out.test.push_back(t);
  }
  return out;
}

}  // namespace mhstn
