// SPDX-License-Identifier: Apache-2.0
#include "mhstn/wind.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mhstn/errors.hpp"

namespace mhstn {

WindComponents decompose_wind(double speed, double theta_deg) {
  if (!(speed >= 0.0)) throw ArgumentError("wind speed must be non-negative: " + std::to_string(speed));
  const double rad = theta_deg / 360.0 * 2.0 * std::numbers::pi;
  return {-speed * std::sin(rad), -speed * std::cos(rad)};
}

double canonical_direction(double theta_deg) {
  double t = std::fmod(theta_deg, 360.0);
  if (t <= 0.0) t += 360.0;
  return t;
}

double recover_direction(double vx, double vy) {
  if (vx == 0.0 && vy == 0.0) throw ArgumentError("calm wind: direction undefined");
  // atan2 of the reversed vector is the "from" bearing; it reproduces every
  // branch of the piecewise arctan formula and stays defined at vy = 0.
  const double deg = std::atan2(-vx, -vy) * 180.0 / std::numbers::pi;
  return canonical_direction(deg);
}

}  // namespace mhstn
