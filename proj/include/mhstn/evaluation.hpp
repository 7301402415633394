// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mhstn/covariates.hpp"
#include "mhstn/pipeline.hpp"
#include "mhstn/splits.hpp"

namespace mhstn {

double rmse(std::span<const double> truth, std::span<const double> pred);
// Circular distance in degrees, in [0, 180]. Angles must lie in (0, 360].
double angle_difference(double a, double b);
double amae(std::span<const double> truth_deg, std::span<const double> pred_deg);
double namae(std::span<const double> truth_deg, std::span<const double> pred_deg);
// Relative to the constant mean of `truth`; a constant truth throws
// NumericError.
double rrse(std::span<const double> truth, std::span<const double> pred);

// Observation at t+k-24 for k = 1..K.
std::vector<double> persistence_forecast(const WeatherFrame& frame, Variable var,
                                         std::size_t station, std::size_t fct, std::size_t horizon);
// NWP values over [fct+1, fct+K].
std::vector<double> nwp_forecast(const WeatherFrame& frame, Variable var, std::size_t fct,
                                 std::size_t horizon);

// Evaluated variables in report column order.
inline constexpr std::array<Variable, 4> kEvaluatedVariables{Variable::v, Variable::vx, Variable::vy,
                                                             Variable::theta};

// Forecasts for the evaluated variables, [station][origin][horizon] each.
struct ForecastBundle {
  std::map<Variable, std::vector<std::vector<std::vector<double>>>> values;
};

// Station-level metrics for one variable; speed variables fill rmse and
// rrse, direction fills amae and namae.
struct VariableMetrics {
  double rmse = 0.0;
  double rrse = 0.0;
  double amae = 0.0;
  double namae = 0.0;
  bool rrse_defined = true;
  std::size_t undefined_directions = 0;  // calm predictions left out of amae
};

// metrics[variable][station]
using StationMetrics = std::map<Variable, std::vector<VariableMetrics>>;

StationMetrics score_forecasts(const WeatherFrame& frame, const std::vector<std::size_t>& origins,
                               std::size_t horizon, const ForecastBundle& forecasts,
                               bool clip_speed = false);

// Model roster entry. Names: persistence, nwp, lstm-h, mhstn-t, mhstn-s,
// mhstn-e; a "+c" suffix selects covariates per fold on the training span.
struct ModelSpec {
  enum class Kind { persistence, nwp, lstm_h, mhstn_t, mhstn_s, mhstn_e };
  Kind kind = Kind::persistence;
  bool covariates = false;

  std::string name() const;
  bool trained() const noexcept { return kind != Kind::persistence && kind != Kind::nwp; }
};

ModelSpec parse_model(std::string_view name);
std::vector<ModelSpec> parse_roster(std::string_view csv);

struct ExperimentConfig {
  PipelineOptions pipeline;  // config.seed is replaced by each entry of seeds
  std::vector<std::uint64_t> seeds{0};
  int fct_hour = 0;
  double ridge_lambda = 1.0;
  double covariate_threshold = 0.2;
  bool clip_speed = false;
  std::size_t jobs = 1;
  // Optional fixed covariates used by "+c" models instead of per-fold
  // selection.
  std::optional<std::map<Variable, SelectedSets>> fixed_covariates;
};

struct ExperimentCell {
  std::string model;
  std::size_t fold = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string reason;  // filled when !ok
  StationMetrics metrics;
};

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

struct MetricReport {
  SplitMode mode = SplitMode::incremental;
  std::vector<std::string> stations;
  std::vector<std::string> models;
  std::size_t folds = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<ExperimentCell> cells;

  // Over stations x folds x seeds of successful cells; metric is one of
  // rmse, rrse, amae, namae.
  Aggregate aggregate(const std::string& model, Variable var, std::string_view metric) const;
  std::size_t failed_cells(const std::string& model) const;
};

MetricReport run_experiment(const WeatherFrame& frame, const std::vector<HourRange>& intervals,
                            const SplitPlan& plan, const std::vector<ModelSpec>& roster,
                            const ExperimentConfig& config);

// Key/value header, a cell status section and one table of model rows by
// variable/metric columns with "mean ± std" entries.
void write_metric_report(const std::filesystem::path& path, const MetricReport& report);
// model,fold,seed,station,variable,metric,value
void write_cell_metrics(const std::filesystem::path& path, const MetricReport& report);

double metric_value(const VariableMetrics& m, std::string_view metric);

}  // namespace mhstn
