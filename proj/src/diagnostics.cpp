// SPDX-License-Identifier: Apache-2.0
#include "mhstn/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mhstn/errors.hpp"

namespace mhstn {

Correlation pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("pearson: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return {0.0, true};
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 1e-300 || sbb <= 1e-300) return {0.0, true};
  return {sab / std::sqrt(saa * sbb), false};
}

Correlation lagged_correlation(std::span<const double> leader, std::span<const double> follower,
                               std::size_t lag) {
  if (leader.size() != follower.size()) throw DimensionError("lagged_correlation: length mismatch");
  if (lag >= leader.size()) return {0.0, true};
  const std::size_t n = leader.size() - lag;
  return pearson(leader.subspan(0, n), follower.subspan(lag, n));
}

std::vector<Correlation> autocorrelation(std::span<const double> series, std::size_t max_lag) {
  std::vector<Correlation> out;
  for (std::size_t lag = 0; lag <= max_lag; ++lag)
    out.push_back(lagged_correlation(series, series, lag));
  return out;
}

std::vector<CorrelationCurve> correlation_diagnostics(const WeatherFrame& frame, Variable variable,
                                                      std::size_t max_lag, std::size_t station) {
  if (station >= frame.station_count()) throw ArgumentError("station index out of range");
  const auto target = frame.obs_series(variable, station);
  std::vector<CorrelationCurve> out;
  out.push_back({"auto", std::string(variable_name(variable)), autocorrelation(target, max_lag)});

  auto curve = [&](std::string kind, std::string label, const std::vector<double>& partner) {
    CorrelationCurve c{std::move(kind), std::move(label), {}};
    for (std::size_t lag = 0; lag <= max_lag; ++lag)
      c.by_lag.push_back(lagged_correlation(partner, target, lag));
    out.push_back(std::move(c));
  };
  for (auto var : kAllVariables) {
    if (var == variable) continue;
    curve("cross", std::string(variable_name(var)), frame.obs_series(var, station));
  }
  curve("cross", "nwp." + std::string(variable_name(variable)), frame.nwp_series(variable));
  for (std::size_t s = 0; s < frame.station_count(); ++s) {
    if (s == station) continue;
    curve("spatial", frame.stations()[s], frame.obs_series(variable, s));
  }
  return out;
}

void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<CorrelationCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "kind,series,lag,correlation,degenerate\n";
  char buf[64];
  for (const auto& c : curves) {
    for (std::size_t lag = 0; lag < c.by_lag.size(); ++lag) {
      std::snprintf(buf, sizeof buf, "%.6f", c.by_lag[lag].value);
      out << c.kind << ',' << c.series << ',' << lag << ',' << buf << ','
          << (c.by_lag[lag].degenerate ? 1 : 0) << '\n';
    }
  }
}

}  // namespace mhstn
