// SPDX-License-Identifier: Apache-2.0
#include "mhstn/series.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "mhstn/errors.hpp"
#include "mhstn/wind.hpp"

namespace mhstn {

namespace {

template <typename Mean>
std::vector<double> fill_with(std::span<const double> series, Mean mean) {
  std::vector<double> out(series.begin(), series.end());
  const std::size_t n = out.size();
  std::vector<std::optional<std::size_t>> next(n);
  std::optional<std::size_t> seen;
  for (std::size_t i = n; i-- > 0;) {
    next[i] = seen;
    if (!std::isnan(series[i])) seen = i;
  }
  if (!seen) throw DataError("series has no present values");
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(series[i])) {
      prev = i;
      continue;
    }
    if (prev && next[i]) {
      out[i] = mean(series[*prev], series[*next[i]]);
    } else if (prev) {
      out[i] = series[*prev];
    } else {
      out[i] = series[*next[i]];
    }
  }
  return out;
}

}  // namespace

std::vector<double> fill_missing(std::span<const double> series) {
  return fill_with(series, [](double a, double b) { return 0.5 * (a + b); });
}

std::vector<double> fill_missing_direction(std::span<const double> series) {
  return fill_with(series, [](double a, double b) {
    constexpr double k = std::numbers::pi / 180.0;
    const double s = std::sin(a * k) + std::sin(b * k);
    const double c = std::cos(a * k) + std::cos(b * k);
    // Opposite directions have no circular mean; keep the earlier one.
    if (std::abs(s) < 1e-12 && std::abs(c) < 1e-12) return a;
    return canonical_direction(std::atan2(s, c) / k);
  });
}

SeriesStats compute_stats(std::span<const double> values) {
  if (values.empty()) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  const double sd = std::sqrt(var);
  return {mean, sd > 1e-12 ? sd : 1.0};
}

std::vector<double> normalize(std::span<const double> xs, const SeriesStats& s) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(normalize(x, s));
  return out;
}

std::vector<double> denormalize(std::span<const double> zs, const SeriesStats& s) {
  std::vector<double> out;
  out.reserve(zs.size());
  for (double z : zs) out.push_back(denormalize(z, s));
  return out;
}

}  // namespace mhstn
