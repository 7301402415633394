// SPDX-License-Identifier: Apache-2.0
#include "mhstn/frame.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mhstn/errors.hpp"
#include "mhstn/series.hpp"
#include "mhstn/wind.hpp"

namespace mhstn {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == line.npos ? line.npos : comma - start)));
    if (comma == line.npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_value(std::string_view field, const std::filesystem::path& path, std::size_t line_no) {
  if (field.empty()) return kMissing;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed number '" +
                    std::string(field) + "'");
  }
  return value;
}

// Reads a header-led comma-separated file, handing each data row to `row`
// together with a column lookup.
template <typename RowFn>
void read_table(const std::filesystem::path& path, const std::vector<std::string>& required,
                RowFn row) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": missing header row");
  const auto header = split_row(line);
  std::vector<std::size_t> columns;
  for (const auto& name : required) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError(path.string() + ": missing column '" + name + "'");
    columns.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_row(line);
    if (fields.size() < header.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    std::vector<std::string_view> picked;
    for (auto c : columns) picked.push_back(fields[c]);
    row(picked, line_no);
  }
}

std::string format_value(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  const auto s = trim(text);
  if (s.size() < 13 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ')) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  const int year = parse_int(s.substr(0, 4), text);
  const int month = parse_int(s.substr(5, 2), text);
  const int day = parse_int(s.substr(8, 2), text);
  const int hour = parse_int(s.substr(11, 2), text);
  int minute = 0;
  int second = 0;
  if (s.size() >= 16) {
    if (s[13] != ':') throw DataError("malformed timestamp '" + std::string(text) + "'");
    minute = parse_int(s.substr(14, 2), text);
  }
  if (s.size() >= 19) {
    if (s[16] != ':') throw DataError("malformed timestamp '" + std::string(text) + "'");
    second = parse_int(s.substr(17, 2), text);
  }
  if (s.size() != 13 && s.size() != 16 && s.size() != 19) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour < 0 || hour > 23 || minute != 0 || second != 0) {
    throw DataError("timestamp not on an hourly boundary: '" + std::string(text) + "'");
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{hour};
}

std::string format_timestamp(Timestamp ts) {
  const auto day = std::chrono::floor<std::chrono::days>(ts);
  const std::chrono::year_month_day ymd{day};
  const auto hour = (ts - day).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:00:00", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hour));
  return buf;
}

int hour_of_day(Timestamp ts) {
  const auto day = std::chrono::floor<std::chrono::days>(ts);
  return static_cast<int>((ts - day).count());
}

WeatherFrame::WeatherFrame(std::vector<Timestamp> timeline, std::vector<std::string> stations,
                           std::vector<double> obs, std::vector<double> nwp)
    : timeline_(std::move(timeline)),
      stations_(std::move(stations)),
      obs_(std::move(obs)),
      nwp_(std::move(nwp)) {
  const std::size_t T = timeline_.size();
  if (stations_.empty()) throw DataError("frame has no stations");
  if (obs_.size() != T * kVariableCount * stations_.size() || nwp_.size() != T * kVariableCount) {
    throw DataError("frame arrays do not match timeline and station counts");
  }
  for (std::size_t t = 1; t < T; ++t) {
    if (timeline_[t] - timeline_[t - 1] != std::chrono::hours{1}) {
      throw DataError("timeline is not gap-free hourly at " + format_timestamp(timeline_[t]));
    }
  }
  for (double x : obs_)
    if (!std::isfinite(x)) throw DataError("frame observations contain missing values");
  for (double x : nwp_)
    if (!std::isfinite(x)) throw DataError("frame NWP contains missing values");
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < stations_.size(); ++s) {
      const double v = this->obs(t, Variable::v, s);
      const double th = this->obs(t, Variable::theta, s);
      if (v < 0.0) throw DataError("negative wind speed at " + format_timestamp(timeline_[t]));
      if (!(th > 0.0 && th <= 360.0)) {
        throw DataError("wind direction outside (0, 360] at " + format_timestamp(timeline_[t]));
      }
      const auto c = decompose_wind(v, th);
      if (std::abs(c.vx - this->obs(t, Variable::vx, s)) > 1e-9 ||
          std::abs(c.vy - this->obs(t, Variable::vy, s)) > 1e-9) {
        throw DataError("vx/vy inconsistent with (v, theta) at " + format_timestamp(timeline_[t]));
      }
    }
  }
}

std::size_t WeatherFrame::station_index(std::string_view id) const {
  const auto it = std::find(stations_.begin(), stations_.end(), id);
  if (it == stations_.end()) throw ArgumentError("unknown station '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - stations_.begin());
}

std::vector<double> WeatherFrame::obs_series(Variable var, std::size_t station) const {
  std::vector<double> out(length());
  for (std::size_t t = 0; t < length(); ++t) out[t] = obs(t, var, station);
  return out;
}

std::vector<double> WeatherFrame::nwp_series(Variable var) const {
  std::vector<double> out(length());
  for (std::size_t t = 0; t < length(); ++t) out[t] = nwp(t, var);
  return out;
}

std::vector<ObservationRow> read_observations(const std::filesystem::path& path) {
  std::vector<ObservationRow> rows;
  read_table(path, {"timestamp", "station", "v", "theta", "tp", "rh", "slp"},
             [&](const std::vector<std::string_view>& f, std::size_t line_no) {
               ObservationRow r;
               r.time = parse_timestamp(f[0]);
               r.station = std::string(f[1]);
               if (r.station.empty()) {
                 throw DataError(path.string() + ":" + std::to_string(line_no) + ": empty station");
               }
               r.v = parse_value(f[2], path, line_no);
               r.theta = parse_value(f[3], path, line_no);
               r.tp = parse_value(f[4], path, line_no);
               r.rh = parse_value(f[5], path, line_no);
               r.slp = parse_value(f[6], path, line_no);
               rows.push_back(std::move(r));
             });
  return rows;
}

std::vector<NwpRow> read_nwp(const std::filesystem::path& path) {
  std::vector<NwpRow> rows;
  std::vector<std::string> columns{"timestamp"};
  for (auto v : kAllVariables) columns.emplace_back(variable_name(v));
  read_table(path, columns, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    NwpRow r;
    r.time = parse_timestamp(f[0]);
    for (std::size_t k = 0; k < kVariableCount; ++k) {
      r.values[k] = parse_value(f[k + 1], path, line_no);
      if (std::isnan(r.values[k])) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": missing NWP value");
      }
    }
    rows.push_back(r);
  });
  return rows;
}

WeatherFrame build_frame(const std::vector<ObservationRow>& obs, const std::vector<NwpRow>& nwp) {
  if (nwp.empty()) throw DataError("NWP data is empty");
  std::vector<Timestamp> timeline;
  timeline.reserve(nwp.size());
  for (const auto& r : nwp) timeline.push_back(r.time);
  for (std::size_t t = 1; t < timeline.size(); ++t) {
    if (timeline[t] - timeline[t - 1] != std::chrono::hours{1}) {
      throw DataError("NWP timeline is not gap-free hourly at " + format_timestamp(timeline[t]));
    }
  }
  const std::size_t T = timeline.size();

  std::vector<std::string> stations;
  std::unordered_map<std::string, std::size_t> station_ids;
  for (const auto& r : obs) {
    if (station_ids.emplace(r.station, stations.size()).second) stations.push_back(r.station);
  }
  if (stations.empty()) throw DataError("observation data is empty");
  const std::size_t V = stations.size();

  // raw[var][station][t] for the measured variables.
  constexpr std::array<Variable, 5> measured{Variable::v, Variable::theta, Variable::tp,
                                             Variable::rh, Variable::slp};
  std::vector<std::vector<std::vector<double>>> raw(
      kVariableCount, std::vector<std::vector<double>>(V, std::vector<double>(T, kMissing)));
  std::vector<std::vector<bool>> seen(V, std::vector<bool>(T, false));
  for (const auto& r : obs) {
    const auto offset = (r.time - timeline.front()).count();
    if (offset < 0 || static_cast<std::size_t>(offset) >= T) {
      throw DataError("observation at " + format_timestamp(r.time) + " outside the NWP timeline");
    }
    const auto t = static_cast<std::size_t>(offset);
    const std::size_t s = station_ids.at(r.station);
    if (seen[s][t]) {
      throw DataError("duplicate observation for station " + r.station + " at " +
                      format_timestamp(r.time));
    }
    seen[s][t] = true;
    if (!std::isnan(r.v) && r.v < 0.0) {
      throw DataError("negative wind speed at " + format_timestamp(r.time));
    }
    double theta = r.theta;
    if (!std::isnan(theta)) {
      if (theta < 0.0 || theta > 360.0) {
        throw DataError("wind direction outside [0, 360] at " + format_timestamp(r.time));
      }
      theta = canonical_direction(theta);
    }
    raw[index_of(Variable::v)][s][t] = r.v;
    raw[index_of(Variable::theta)][s][t] = theta;
    raw[index_of(Variable::tp)][s][t] = r.tp;
    raw[index_of(Variable::rh)][s][t] = r.rh;
    raw[index_of(Variable::slp)][s][t] = r.slp;
  }

  std::vector<double> obs_values(T * kVariableCount * V);
  auto at = [&](std::size_t t, Variable var, std::size_t s) -> double& {
    return obs_values[(t * kVariableCount + index_of(var)) * V + s];
  };
  for (std::size_t s = 0; s < V; ++s) {
    for (auto var : measured) {
      auto& series = raw[index_of(var)][s];
      const auto filled = var == Variable::theta ? fill_missing_direction(series)
                                                 : fill_missing(series);
      for (std::size_t t = 0; t < T; ++t) at(t, var, s) = filled[t];
    }
    for (std::size_t t = 0; t < T; ++t) {
      const auto c = decompose_wind(at(t, Variable::v, s), at(t, Variable::theta, s));
      at(t, Variable::vx, s) = c.vx;
      at(t, Variable::vy, s) = c.vy;
    }
  }

  std::vector<double> nwp_values(T * kVariableCount);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < kVariableCount; ++k) {
      double x = nwp[t].values[k];
      if (k == index_of(Variable::theta)) x = canonical_direction(x);
      nwp_values[t * kVariableCount + k] = x;
    }
  }
  return WeatherFrame(std::move(timeline), std::move(stations), std::move(obs_values),
                      std::move(nwp_values));
}

WeatherFrame load_frame(const std::filesystem::path& obs_path,
                        const std::filesystem::path& nwp_path) {
  return build_frame(read_observations(obs_path), read_nwp(nwp_path));
}

void write_observations(const std::filesystem::path& path, const WeatherFrame& frame) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "timestamp,station,v,theta,tp,rh,slp\n";
  for (std::size_t t = 0; t < frame.length(); ++t) {
    for (std::size_t s = 0; s < frame.station_count(); ++s) {
      out << format_timestamp(frame.timeline()[t]) << ',' << frame.stations()[s];
      for (auto var : {Variable::v, Variable::theta, Variable::tp, Variable::rh, Variable::slp})
        out << ',' << format_value(frame.obs(t, var, s));
      out << '\n';
    }
  }
}

void write_nwp(const std::filesystem::path& path, const WeatherFrame& frame) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "timestamp";
  for (auto v : kAllVariables) out << ',' << variable_name(v);
  out << '\n';
  for (std::size_t t = 0; t < frame.length(); ++t) {
    out << format_timestamp(frame.timeline()[t]);
    for (auto v : kAllVariables) out << ',' << format_value(frame.nwp(t, v));
    out << '\n';
  }
}

}  // namespace mhstn
