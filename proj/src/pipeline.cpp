// SPDX-License-Identifier: Apache-2.0
#include "mhstn/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mhstn/errors.hpp"
#include "mhstn/wind.hpp"

namespace mhstn {

namespace {

enum : std::uint64_t { kInitStream = 0, kShuffleStream = 1 };

Rng job_rng(std::uint64_t seed, Variable target, std::size_t station, Stage stage,
            std::uint64_t stream) {
  return Rng(derive_seed(seed, {index_of(target), station, static_cast<std::uint64_t>(stage), stream}));
}

Var batch_of(const Tensor& t, std::span<const std::size_t> idx) { return constant(gather_rows(t, idx)); }

double full_mse(const Var& truth, const Var& pred) { return mse_loss(truth, pred)->value.item(); }

std::vector<Tensor> representations(const StationNets& nets, const std::vector<WindowTensors>& data) {
  NoGradGuard no_grad;
  std::vector<Tensor> out;
  for (std::size_t s = 0; s < data.size(); ++s) {
    out.push_back(nets.temporal[s]
                      .forward(constant(data[s].history), constant(data[s].future))
                      .representation->value);
  }
  return out;
}

Tensor stack_maps(const std::vector<Tensor>& reps) {
  std::vector<Var> vars;
  for (const auto& r : reps) vars.push_back(constant(r));
  NoGradGuard no_grad;
  return stack_feature_maps(vars)->value;
}

TemporalShape temporal_shape(const WindowSpec& spec, const PipelineOptions& options) {
  TemporalShape shape;
  shape.history_steps = spec.history;
  shape.history_width = spec.history_width();
  shape.horizon = spec.horizon;
  shape.future_width = options.use_future ? spec.future_width() : 0;
  shape.lstm_hidden = options.lstm_hidden;
  shape.future_expansion = options.future_expansion;
  return shape;
}

}  // namespace

NormStats NormStats::fit(const WeatherFrame& frame, HourRange range) {
  if (range.size() == 0 || range.end > frame.length()) throw ArgumentError("NormStats: bad range");
  NormStats n;
  n.fitted_on = range;
  n.obs.resize(frame.station_count());
  std::vector<double> buf(range.size());
  for (auto var : kAllVariables) {
    for (std::size_t s = 0; s < frame.station_count(); ++s) {
      for (std::size_t t = range.begin; t < range.end; ++t) buf[t - range.begin] = frame.obs(t, var, s);
      n.obs[s][index_of(var)] = compute_stats(buf);
    }
    for (std::size_t t = range.begin; t < range.end; ++t) buf[t - range.begin] = frame.nwp(t, var);
    n.nwp[index_of(var)] = compute_stats(buf);
  }
  return n;
}

WindowTensors window_tensors(const WeatherFrame& frame, std::size_t station, const WindowSpec& spec,
                             const std::vector<std::size_t>& origins, const NormStats& norm) {
  const std::size_t n = origins.size();
  const std::size_t hw = spec.history_width();
  const std::size_t fw = spec.future_width();
  WindowTensors out{Tensor({n, spec.history, hw}), Tensor({n, spec.horizon * fw}),
                    Tensor({n, spec.horizon})};
  std::vector<Variable> hist_vars{spec.target};
  hist_vars.insert(hist_vars.end(), spec.history_covariates.begin(), spec.history_covariates.end());
  std::vector<Variable> fut_vars{spec.target};
  fut_vars.insert(fut_vars.end(), spec.future_covariates.begin(), spec.future_covariates.end());
  for (std::size_t i = 0; i < n; ++i) {
    const SampleWindow w = make_window(frame, station, spec, origins[i]);
    for (std::size_t k = 0; k < w.history.size(); ++k)
      out.history[i * w.history.size() + k] =
          normalize(w.history[k], norm.obs.at(station)[index_of(hist_vars[k % hw])]);
    for (std::size_t k = 0; k < w.future.size(); ++k)
      out.future[i * w.future.size() + k] = normalize(w.future[k], norm.nwp[index_of(fut_vars[k % fw])]);
    for (std::size_t k = 0; k < spec.horizon; ++k)
      out.target[i * spec.horizon + k] = normalize(w.target[k], norm.target(station, spec.target));
  }
  return out;
}

std::string_view stage_name(Stage s) noexcept {
  switch (s) {
    case Stage::temporal: return "temporal";
    case Stage::spatial: return "spatial";
    case Stage::ensemble: return "ensemble";
  }
  return "?";
}

StationNets train_pipeline(const WeatherFrame& frame, const WindowSpec& spec,
                           const std::vector<std::size_t>& train_origins,
                           const std::vector<std::size_t>& validation_origins,
                           const NormStats& norm, const PipelineOptions& options,
                           PipelineReport* report) {
  const TrainConfig& cfg = options.config;
  cfg.validate();
  if (train_origins.empty() || validation_origins.empty()) {
    throw ArgumentError("train_pipeline: empty training or validation windows");
  }
  if (spec.horizon != cfg.horizon || spec.history != cfg.history) {
    throw ArgumentError("train_pipeline: window spec disagrees with K/W in the config");
  }
  const std::size_t V = frame.station_count();
  if (norm.obs.size() != V) throw ArgumentError("train_pipeline: normalization covers other stations");

  StationNets nets;
  nets.spec = spec;
  nets.stations = frame.stations();
  nets.norm = norm;

  std::vector<WindowTensors> train, val;
  for (std::size_t s = 0; s < V; ++s) {
    train.push_back(window_tensors(frame, s, spec, train_origins, norm));
    val.push_back(window_tensors(frame, s, spec, validation_origins, norm));
  }

  const TemporalShape tshape = temporal_shape(spec, options);
  for (std::size_t s = 0; s < V; ++s) {
    Rng init = job_rng(cfg.seed, spec.target, s, Stage::temporal, kInitStream);
    nets.temporal.emplace_back(tshape, init);
    const TemporalNet& net = nets.temporal.back();
    StageProblem problem;
    problem.params = vars_of(net.parameters());
    problem.train_size = train_origins.size();
    problem.validation_size = validation_origins.size();
    const WindowTensors& tr = train[s];
    const WindowTensors& va = val[s];
    const bool fut = tshape.uses_future();
    problem.batch_loss = [&net, &tr, fut](std::span<const std::size_t> idx) {
      auto out = net.forward(batch_of(tr.history, idx), fut ? batch_of(tr.future, idx) : nullptr);
      return mse_loss(batch_of(tr.target, idx), out.predictions);
    };
    problem.validation_loss = [&net, &va] {
      return full_mse(constant(va.target),
                      net.forward(constant(va.history), constant(va.future)).predictions);
    };
    Rng shuffle = job_rng(cfg.seed, spec.target, s, Stage::temporal, kShuffleStream);
    auto rec = train_stage(problem, cfg, shuffle);
    if (report) report->records[0].push_back(std::move(rec));
  }
  nets.trained_through = Stage::temporal;
  if (options.last_stage == Stage::temporal) return nets;
  if (!tshape.uses_future() && tshape.representation_size() < options.spatial_kernel) {
    throw ArgumentError("train_pipeline: representation shorter than the spatial kernel");
  }

  // Temporal nets are frozen from here on: their outputs enter as constants.
  const Tensor train_map = stack_maps(representations(nets, train));
  const Tensor val_map = stack_maps(representations(nets, val));
  SpatialShape sshape;
  sshape.representation = tshape.representation_size();
  sshape.stations = V;
  sshape.horizon = spec.horizon;
  sshape.filters = options.spatial_filters;
  sshape.kernel = options.spatial_kernel;
  for (std::size_t s = 0; s < V; ++s) {
    Rng init = job_rng(cfg.seed, spec.target, s, Stage::spatial, kInitStream);
    nets.spatial.emplace_back(sshape, init);
    const SpatialNet& net = nets.spatial.back();
    StageProblem problem;
    problem.params = vars_of(net.parameters());
    problem.train_size = train_origins.size();
    problem.validation_size = validation_origins.size();
    const Tensor& target = train[s].target;
    const Tensor& val_target = val[s].target;
    problem.batch_loss = [&net, &train_map, &target](std::span<const std::size_t> idx) {
      return mse_loss(batch_of(target, idx), net.forward(batch_of(train_map, idx)));
    };
    problem.validation_loss = [&net, &val_map, &val_target] {
      return full_mse(constant(val_target), net.forward(constant(val_map)));
    };
    Rng shuffle = job_rng(cfg.seed, spec.target, s, Stage::spatial, kShuffleStream);
    auto rec = train_stage(problem, cfg, shuffle);
    if (report) report->records[1].push_back(std::move(rec));
  }
  nets.trained_through = Stage::spatial;
  if (options.last_stage == Stage::spatial) return nets;

  for (std::size_t s = 0; s < V; ++s) {
    Tensor local_tr, local_va, spatial_tr, spatial_va;
    {
      NoGradGuard no_grad;
      const TemporalNet& tnet = nets.temporal[s];
      local_tr = tnet.forward(constant(train[s].history), constant(train[s].future)).predictions->value;
      local_va = tnet.forward(constant(val[s].history), constant(val[s].future)).predictions->value;
      spatial_tr = nets.spatial[s].forward(constant(train_map))->value;
      spatial_va = nets.spatial[s].forward(constant(val_map))->value;
    }
    nets.ensemble.emplace_back(spec.horizon);
    const EnsembleNet& net = nets.ensemble.back();
    StageProblem problem;
    problem.params = vars_of(net.parameters());
    problem.train_size = train_origins.size();
    problem.validation_size = validation_origins.size();
    const Tensor& target = train[s].target;
    const Tensor& val_target = val[s].target;
    problem.batch_loss = [&](std::span<const std::size_t> idx) {
      return mse_loss(batch_of(target, idx),
                      net.forward(batch_of(local_tr, idx), batch_of(spatial_tr, idx)));
    };
    problem.validation_loss = [&] {
      return full_mse(constant(val_target), net.forward(constant(local_va), constant(spatial_va)));
    };
    Rng shuffle = job_rng(cfg.seed, spec.target, s, Stage::ensemble, kShuffleStream);
    auto rec = train_stage(problem, cfg, shuffle);
    if (report) report->records[2].push_back(std::move(rec));
  }
  nets.trained_through = Stage::ensemble;
  return nets;
}

LevelOutputs forecast_normalized(const StationNets& nets, const WeatherFrame& frame,
                                 const std::vector<std::size_t>& origins) {
  if (frame.stations() != nets.stations) {
    throw ArgumentError("forecast: frame stations differ from the trained station order");
  }
  NoGradGuard no_grad;
  const std::size_t V = nets.stations.size();
  std::vector<WindowTensors> data;
  for (std::size_t s = 0; s < V; ++s) data.push_back(window_tensors(frame, s, nets.spec, origins, nets.norm));
  LevelOutputs out;
  std::vector<Tensor> reps;
  for (std::size_t s = 0; s < V; ++s) {
    auto r = nets.temporal[s].forward(constant(data[s].history), constant(data[s].future));
    out.temporal.push_back(r.predictions->value);
    reps.push_back(r.representation->value);
  }
  if (nets.trained_through >= Stage::spatial) {
    const Tensor map = stack_maps(reps);
    for (std::size_t s = 0; s < V; ++s) out.spatial.push_back(nets.spatial[s].forward(constant(map))->value);
  }
  if (nets.trained_through >= Stage::ensemble) {
    for (std::size_t s = 0; s < V; ++s) {
      out.ensemble.push_back(
          nets.ensemble[s].forward(constant(out.temporal[s]), constant(out.spatial[s]))->value);
    }
  }
  return out;
}

std::vector<std::vector<std::vector<double>>> forecast(const StationNets& nets,
                                                       const WeatherFrame& frame,
                                                       const std::vector<std::size_t>& origins,
                                                       Level level) {
  const auto outputs = forecast_normalized(nets, frame, origins);
  const std::vector<Tensor>* chosen = &outputs.temporal;
  if (level == Level::spatial) chosen = &outputs.spatial;
  if (level == Level::ensemble) chosen = &outputs.ensemble;
  if (chosen->empty()) {
    throw StateError("forecast: requested level was not trained for target " +
                     std::string(variable_name(nets.target())));
  }
  const std::size_t K = nets.spec.horizon;
  std::vector<std::vector<std::vector<double>>> out(nets.stations.size());
  for (std::size_t s = 0; s < nets.stations.size(); ++s) {
    const auto& stats = nets.norm.target(s, nets.target());
    for (std::size_t i = 0; i < origins.size(); ++i) {
      std::vector<double> row(K);
      for (std::size_t k = 0; k < K; ++k) row[k] = denormalize((*chosen)[s][i * K + k], stats);
      out[s].push_back(std::move(row));
    }
  }
  return out;
}

PredictionSet predict(const StationNets& v_nets, const StationNets& vx_nets,
                      const StationNets& vy_nets, const WeatherFrame& frame,
                      const std::vector<std::size_t>& origins, Level level) {
  if (v_nets.target() != Variable::v || vx_nets.target() != Variable::vx ||
      vy_nets.target() != Variable::vy) {
    throw ArgumentError("predict: nets must target v, vx and vy respectively");
  }
  if (v_nets.spec.horizon != vx_nets.spec.horizon || v_nets.spec.horizon != vy_nets.spec.horizon) {
    throw ArgumentError("predict: nets disagree on K");
  }
  PredictionSet set;
  set.stations = frame.stations();
  set.origins = origins;
  set.horizon = v_nets.spec.horizon;
  set.v = forecast(v_nets, frame, origins, level);
  set.vx = forecast(vx_nets, frame, origins, level);
  set.vy = forecast(vy_nets, frame, origins, level);
  set.theta = set.vx;
  set.theta_defined.assign(set.stations.size(),
                           std::vector<std::vector<bool>>(origins.size(), std::vector<bool>(set.horizon, true)));
  for (std::size_t s = 0; s < set.stations.size(); ++s) {
    for (std::size_t i = 0; i < origins.size(); ++i) {
      for (std::size_t k = 0; k < set.horizon; ++k) {
        const double x = set.vx[s][i][k];
        const double y = set.vy[s][i][k];
        if (x == 0.0 && y == 0.0) {
          set.theta[s][i][k] = std::nan("");
          set.theta_defined[s][i][k] = false;
        } else {
          set.theta[s][i][k] = recover_direction(x, y);
        }
      }
    }
  }
  return set;
}

void write_prediction_dump(const std::filesystem::path& path, const PredictionSet& set,
                           const WeatherFrame& frame) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "fct,station,horizon,variable,truth,pred\n";
  char truth[48], pred[48];
  const std::array<std::pair<Variable, const std::vector<std::vector<std::vector<double>>>*>, 4> rows{
      {{Variable::v, &set.v}, {Variable::vx, &set.vx}, {Variable::vy, &set.vy}, {Variable::theta, &set.theta}}};
  for (std::size_t i = 0; i < set.origins.size(); ++i) {
    const std::size_t fct = set.origins[i];
    const std::string stamp = format_timestamp(frame.timeline()[fct]);
    for (std::size_t s = 0; s < set.stations.size(); ++s) {
      for (std::size_t k = 0; k < set.horizon; ++k) {
        const std::size_t t = fct + 1 + k;
        for (const auto& [var, values] : rows) {
          if (t < frame.length()) std::snprintf(truth, sizeof truth, "%.17g", frame.obs(t, var, s));
          else truth[0] = '\0';
          const double p = (*values)[s][i][k];
          if (std::isnan(p)) pred[0] = '\0';
          else std::snprintf(pred, sizeof pred, "%.17g", p);
          out << stamp << ',' << set.stations[s] << ',' << (k + 1) << ',' << variable_name(var)
              << ',' << truth << ',' << pred << '\n';
        }
      }
    }
  }
}

}  // namespace mhstn
