// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace mhstn {

struct WindComponents {
  double vx;  // lateral
  double vy;  // longitudinal
};

// vx = -v sin(theta), vy = -v cos(theta), theta in degrees.
WindComponents decompose_wind(double speed, double theta_deg);

// Inverse of decompose_wind; result in (0, 360]. Throws ArgumentError for a
// calm vector (vx = vy = 0).
double recover_direction(double vx, double vy);

// Maps any finite angle onto (0, 360].
double canonical_direction(double theta_deg);

}  // namespace mhstn
