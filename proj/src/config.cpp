// SPDX-License-Identifier: Apache-2.0
#include "mhstn/config.hpp"

#include <charconv>
#include <fstream>

#include "mhstn/errors.hpp"

namespace mhstn {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      {"observations", "data/observations.csv", "observation file"},
      {"nwp", "data/nwp.csv", "NWP file"},
      {"data_dir", "data", "output directory of synth and prepare"},
      {"checkpoints", "out/checkpoints", "checkpoint directory"},
      {"covariates", "out/covariates.txt", "covariate report"},
      {"predictions", "out/predictions.csv", "prediction dump"},
      {"report", "out/report.txt", "metric report"},
      {"cell_metrics", "out/cells.csv", "per-cell metrics"},
      {"diagnostics", "out/diagnostics.csv", "correlation curves"},
      {"training_log", "out/training_log.csv", "per-stage training summary"},
      {"lr_init", "0.001", "initial learning rate"},
      {"lr_factor", "0.5", "plateau reduction factor"},
      {"lr_patience", "3", "stale epochs before a reduction"},
      {"lr_min", "0.0001", "learning-rate floor"},
      {"batch", "32", "mini-batch size"},
      {"early_stop_patience", "30", "stale epochs before stopping"},
      {"max_epochs", "1000", "epoch cap per stage"},
      {"seed", "1", "root seed"},
      {"horizon", "24", "K, forecast steps"},
      {"history", "24", "W, observed steps"},
      {"fct_hour", "0", "clock hour of the first forecast step"},
      {"lstm_hidden", "32", "LSTM units"},
      {"future_expansion", "2", "NWP MLP units per input value"},
      {"filters", "64", "spatial conv filters"},
      {"kernel", "5", "spatial conv kernel"},
      {"stage", "ensemble", "last trained stage: temporal, spatial or ensemble"},
      {"use_covariates", "false", "train with the selected covariates"},
      {"level", "ensemble", "prediction level: temporal, spatial or ensemble"},
      {"interval", "days:5", "interval unit: month or days:N"},
      {"split_mode", "incremental", "rolling or incremental"},
      {"n_folds", "1", "test intervals"},
      {"history_intervals", "6", "rolling training width in intervals"},
      {"fold", "-1", "fold used by train/predict/select-covariates (-1 = last)"},
      {"covariate_threshold", "0.2", "importance threshold"},
      {"ridge_lambda", "1.0", "ridge penalty"},
      {"models", "persistence,nwp,lstm-h,mhstn-t,mhstn-s,mhstn-e", "evaluation roster"},
      {"seeds", "0", "evaluation seeds"},
      {"jobs", "1", "concurrent independent jobs"},
      {"clip_speed", "false", "clip negative speed predictions before scoring"},
      {"diag_variable", "v", "diagnosed variable"},
      {"diag_station", "", "diagnosed station (empty = first)"},
      {"max_lag", "48", "largest diagnosed lag"},
      {"synth_stations", "3", "synthetic stations"},
      {"synth_days", "30", "synthetic days"},
      {"synth_start", "2018-03-01T00:00:00", "first synthetic hour"},
      {"synth_base_speed", "5.0", "mean speed"},
      {"synth_diurnal_amplitude", "2.0", "diurnal amplitude"},
      {"synth_ar_coefficient", "0.8", "AR(1) coefficient"},
      {"synth_noise_scale", "0.3", "station AR(1) innovation"},
      {"synth_regional_noise", "0.4", "regional AR(1) innovation"},
      {"synth_spatial_strength", "1.0", "weight of the regional component"},
      {"synth_nwp_bias", "1.0", "NWP speed bias"},
      {"synth_station_offset", "0.0", "spread of station offsets"},
      {"synth_nwp_noise", "0.2", "NWP noise"},
      {"synth_direction_noise", "10.0", "station direction noise in degrees"},
  };
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Config::Config() {
  for (const auto& k : config_keys()) {
    values_[k.name] = k.default_value;
    sources_[k.name] = "default";
  }
}

void Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    if (!values_.contains(key)) {
      throw ArgumentError(path.string() + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    }
    values_[key] = trim(std::string_view(content).substr(eq + 1));
    sources_[key] = "file";
  }
}

void Config::set(const std::string& key, std::string value) {
  if (!values_.contains(key)) throw ArgumentError("unknown config key '" + key + "'");
  values_[key] = std::move(value);
  sources_[key] = "cli";
}

const std::string& Config::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ArgumentError("unknown config key '" + key + "'");
  return it->second;
}

const std::string& Config::source(const std::string& key) const { return sources_.at(key); }

double Config::real(const std::string& key) const {
  const auto& s = str(key);
  double x = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw ArgumentError(key + ": not a number: '" + s + "'");
  return x;
}

std::int64_t Config::integer(const std::string& key) const {
  const auto& s = str(key);
  std::int64_t x = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw ArgumentError(key + ": not an integer: '" + s + "'");
  return x;
}

std::size_t Config::count(const std::string& key) const {
  const auto x = integer(key);
  if (x < 0) throw ArgumentError(key + ": must be >= 0");
  return static_cast<std::size_t>(x);
}

bool Config::flag(const std::string& key) const {
  const auto& s = str(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ArgumentError(key + ": expected true or false, got '" + s + "'");
}

std::vector<std::string> Config::list(const std::string& key) const {
  std::vector<std::string> out;
  const auto& s = str(key);
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    auto item = trim(std::string_view(s).substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

}  // namespace mhstn
