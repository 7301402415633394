// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace mhstn {

// Each missing (NaN) value becomes the mean of its nearest present
// predecessor and successor; gaps at either end copy the one available
// neighbour. Throws DataError when nothing is present.
std::vector<double> fill_missing(std::span<const double> series);

// As fill_missing, but averages on the circle, for directions in degrees.
std::vector<double> fill_missing_direction(std::span<const double> series);

struct SeriesStats {
  double mean = 0.0;
  double std = 1.0;
};

// Population statistics; a constant series gets std = 1.
SeriesStats compute_stats(std::span<const double> values);

inline double normalize(double x, const SeriesStats& s) { return (x - s.mean) / s.std; }
inline double denormalize(double z, const SeriesStats& s) { return z * s.std + s.mean; }
std::vector<double> normalize(std::span<const double> xs, const SeriesStats& s);
std::vector<double> denormalize(std::span<const double> zs, const SeriesStats& s);

}  // namespace mhstn
