// SPDX-License-Identifier: Apache-2.0
// Helpers shared by the unit tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "mhstn/autodiff.hpp"
#include "mhstn/frame.hpp"
#include "mhstn/random.hpp"

namespace mhstn::testing {

inline Tensor random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Tensor t(std::move(shape));
  for (auto& x : t.values()) x = u(rng);
  return t;
}

// Largest |analytic - numeric| / max(|analytic|, |numeric|, floor) over
// every element of every parameter, with central differences.
inline double gradient_error(const std::function<Var()>& loss_fn, const std::vector<Var>& params,
                             double step = 1e-5, double floor = 1e-6) {
  for (const auto& p : params) p->value.drop_grad();
  backward(loss_fn());
  double worst = 0.0;
  for (const auto& p : params) {
    const std::vector<double> analytic(p->value.grad().begin(), p->value.grad().end());
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double x = p->value[i];
      double up, down;
      {
        NoGradGuard g;
        p->value[i] = x + step;
        up = loss_fn()->value.item();
        p->value[i] = x - step;
        down = loss_fn()->value.item();
        p->value[i] = x;
      }
      const double numeric = (up - down) / (2.0 * step);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
  }
  return worst;
}

// Scalar probe loss: mean squared distance of `out` to fixed random targets.
inline Var probe_loss(const Var& out, std::uint64_t seed) {
  Rng rng(seed);
  return mse_loss(constant(random_tensor(out->value.shape(), rng)), out);
}

inline std::vector<double> snapshot(const std::vector<Var>& params) {
  std::vector<double> out;
  for (const auto& p : params) out.insert(out.end(), p->value.values().begin(), p->value.values().end());
  return out;
}

// Frame with V stations built from per-station speed/direction generators.
inline WeatherFrame make_frame(std::size_t hours, std::size_t stations,
                               const std::function<double(std::size_t t, std::size_t s)>& speed,
                               const std::function<double(std::size_t t)>& nwp_speed,
                               const std::string& start = "2018-03-01T00:00:00") {
  std::vector<ObservationRow> obs;
  std::vector<NwpRow> nwp;
  const Timestamp t0 = parse_timestamp(start);
  for (std::size_t t = 0; t < hours; ++t) {
    const Timestamp ts = t0 + std::chrono::hours(t);
    for (std::size_t s = 0; s < stations; ++s) {
      ObservationRow r;
      r.time = ts;
      r.station = "S" + std::to_string(s + 1);
      r.v = speed(t, s);
      r.theta = 1.0 + static_cast<double>((t * 7 + s * 40) % 359);
      r.tp = 10.0 + std::sin(0.1 * static_cast<double>(t + s));
      r.rh = 60.0 + std::cos(0.07 * static_cast<double>(t));
      r.slp = 1010.0 + 0.01 * static_cast<double>(t % 50);
      obs.push_back(r);
    }
    NwpRow n;
    n.time = ts;
    const double v = nwp_speed(t);
    const double theta = 1.0 + static_cast<double>((t * 7) % 359);
    const double rad = theta / 360.0 * 2.0 * std::acos(-1.0);
    n.values = {v, -v * std::sin(rad), -v * std::cos(rad), theta, 11.0, 61.0, 1011.0};
    nwp.push_back(n);
  }
  return build_frame(obs, nwp);
}

}  // namespace mhstn::testing
