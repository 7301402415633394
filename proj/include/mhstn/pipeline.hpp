// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "mhstn/ensemble.hpp"
#include "mhstn/frame.hpp"
#include "mhstn/series.hpp"
#include "mhstn/spatial.hpp"
#include "mhstn/splits.hpp"
#include "mhstn/temporal.hpp"
#include "mhstn/training.hpp"
#include "mhstn/windows.hpp"

namespace mhstn {

// Per-series z-score statistics fitted on one hour range of the frame.
struct NormStats {
  std::vector<std::array<SeriesStats, kVariableCount>> obs;  // [station][variable]
  std::array<SeriesStats, kVariableCount> nwp{};
  HourRange fitted_on;

  static NormStats fit(const WeatherFrame& frame, HourRange range);
  const SeriesStats& target(std::size_t station, Variable var) const {
    return obs.at(station)[index_of(var)];
  }
};

// Normalized network inputs for one station and a list of creation indices.
struct WindowTensors {
  Tensor history;  // [n x W x history_width]
  Tensor future;   // [n x K*future_width]
  Tensor target;   // [n x K]
};

WindowTensors window_tensors(const WeatherFrame& frame, std::size_t station, const WindowSpec& spec,
                             const std::vector<std::size_t>& origins, const NormStats& norm);

enum class Stage { temporal = 1, spatial = 2, ensemble = 3 };
std::string_view stage_name(Stage s) noexcept;

struct PipelineOptions {
  TrainConfig config;
  Stage last_stage = Stage::ensemble;
  bool use_future = true;  // false gives the history-only LSTM variant
  std::size_t lstm_hidden = 32;
  std::size_t future_expansion = 2;
  std::size_t spatial_filters = 64;
  std::size_t spatial_kernel = 5;
};

// Networks for one target variable across all stations.
struct StationNets {
  WindowSpec spec;
  std::vector<std::string> stations;
  NormStats norm;
  Stage trained_through = Stage::temporal;
  std::vector<TemporalNet> temporal;
  std::vector<SpatialNet> spatial;
  std::vector<EnsembleNet> ensemble;

  Variable target() const noexcept { return spec.target; }
};

struct PipelineReport {
  // [stage - 1][station]
  std::array<std::vector<StageRecord>, 3> records;
};

// Stage 1 trains each station's temporal net; stage 2 trains each station's
// spatial net on feature maps from the frozen temporal nets; stage 3 trains
// each ensemble with both frozen.
StationNets train_pipeline(const WeatherFrame& frame, const WindowSpec& spec,
                           const std::vector<std::size_t>& train_origins,
                           const std::vector<std::size_t>& validation_origins,
                           const NormStats& norm, const PipelineOptions& options,
                           PipelineReport* report = nullptr);

// Normalized outputs of each trained level, [n x K] per station.
struct LevelOutputs {
  std::vector<Tensor> temporal;
  std::vector<Tensor> spatial;
  std::vector<Tensor> ensemble;
};

LevelOutputs forecast_normalized(const StationNets& nets, const WeatherFrame& frame,
                                 const std::vector<std::size_t>& origins);

enum class Level { temporal, spatial, ensemble };

// Original-unit forecasts [station][origin][horizon] for one level.
std::vector<std::vector<std::vector<double>>> forecast(const StationNets& nets,
                                                       const WeatherFrame& frame,
                                                       const std::vector<std::size_t>& origins,
                                                       Level level);

struct PredictionSet {
  std::vector<std::string> stations;
  std::vector<std::size_t> origins;
  std::size_t horizon = 0;
  // [station][origin][horizon]
  std::vector<std::vector<std::vector<double>>> v, vx, vy, theta;
  // false where the predicted (vx, vy) is calm and theta is undefined
  std::vector<std::vector<std::vector<bool>>> theta_defined;
};

// Direction comes from the predicted components of the vx and vy nets.
PredictionSet predict(const StationNets& v_nets, const StationNets& vx_nets,
                      const StationNets& vy_nets, const WeatherFrame& frame,
                      const std::vector<std::size_t>& origins, Level level = Level::ensemble);

// Rows: fct, station, horizon, variable, truth, pred.
void write_prediction_dump(const std::filesystem::path& path, const PredictionSet& set,
                           const WeatherFrame& frame);

}  // namespace mhstn
