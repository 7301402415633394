// SPDX-License-Identifier: Apache-2.0
#include "mhstn/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "mhstn/errors.hpp"
#include "mhstn/wind.hpp"

namespace mhstn {

namespace {

void check_pair(std::span<const double> truth, std::span<const double> pred, const char* what) {
  if (truth.size() != pred.size()) throw DimensionError(std::string(what) + ": length mismatch");
  if (truth.empty()) throw ArgumentError(std::string(what) + ": empty input");
}

void check_angle(double a) {
  if (!(a > 0.0 && a <= 360.0)) throw ArgumentError("angle outside (0, 360]: " + std::to_string(a));
}

}  // namespace

double rmse(std::span<const double> truth, std::span<const double> pred) {
  check_pair(truth, pred, "rmse");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += (truth[i] - pred[i]) * (truth[i] - pred[i]);
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

double angle_difference(double a, double b) {
  check_angle(a);
  check_angle(b);
  const double d = std::abs(a - b);
  return d <= 180.0 ? d : 360.0 - d;
}

double amae(std::span<const double> truth_deg, std::span<const double> pred_deg) {
  check_pair(truth_deg, pred_deg, "amae");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth_deg.size(); ++i) sum += angle_difference(pred_deg[i], truth_deg[i]);
  return sum / static_cast<double>(truth_deg.size());
}

double namae(std::span<const double> truth_deg, std::span<const double> pred_deg) {
  return amae(truth_deg, pred_deg) / 180.0;
}

double rrse(std::span<const double> truth, std::span<const double> pred) {
  check_pair(truth, pred, "rrse");
  double mean = 0.0;
  for (double y : truth) mean += y;
  mean /= static_cast<double>(truth.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    num += (truth[i] - pred[i]) * (truth[i] - pred[i]);
    den += (truth[i] - mean) * (truth[i] - mean);
  }
  if (den == 0.0) throw NumericError("rrse: truth is constant over the evaluation segment");
  return std::sqrt(num / den);
}

std::vector<double> persistence_forecast(const WeatherFrame& frame, Variable var,
                                         std::size_t station, std::size_t fct, std::size_t horizon) {
  if (horizon == 0 || horizon > 24) throw ArgumentError("persistence: K must be in [1, 24]");
  if (fct + 1 < 24) throw ArgumentError("persistence: fewer than 24 observed hours before the FCT");
  if (fct >= frame.length()) throw ArgumentError("persistence: FCT outside the frame");
  std::vector<double> out(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) out[k - 1] = frame.obs(fct + k - 24, var, station);
  return out;
}

std::vector<double> nwp_forecast(const WeatherFrame& frame, Variable var, std::size_t fct,
                                 std::size_t horizon) {
  if (fct + horizon >= frame.length()) throw DataError("nwp: rows missing after the FCT");
  std::vector<double> out(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) out[k - 1] = frame.nwp(fct + k, var);
  return out;
}

StationMetrics score_forecasts(const WeatherFrame& frame, const std::vector<std::size_t>& origins,
                               std::size_t horizon, const ForecastBundle& forecasts, bool clip_speed) {
  StationMetrics out;
  const std::size_t V = frame.station_count();
  for (auto var : kEvaluatedVariables) {
    auto it = forecasts.values.find(var);
    if (it == forecasts.values.end()) continue;
    const auto& pred = it->second;
    if (pred.size() != V) throw DimensionError("score: forecasts cover the wrong number of stations");
    auto& per_station = out[var];
    per_station.resize(V);
    for (std::size_t s = 0; s < V; ++s) {
      std::vector<double> truth, guess;
      std::size_t undefined = 0;
      if (pred[s].size() != origins.size()) throw DimensionError("score: forecast count mismatch");
      for (std::size_t i = 0; i < origins.size(); ++i) {
        if (pred[s][i].size() != horizon) throw DimensionError("score: horizon mismatch");
        for (std::size_t k = 0; k < horizon; ++k) {
          double p = pred[s][i][k];
          if (std::isnan(p)) {
            ++undefined;
            continue;
          }
          if (clip_speed && var == Variable::v) p = std::max(p, 0.0);
          truth.push_back(frame.obs(origins[i] + 1 + k, var, s));
          guess.push_back(p);
        }
      }
      VariableMetrics& m = per_station[s];
      m.undefined_directions = undefined;
      if (var == Variable::theta) {
        m.amae = amae(truth, guess);
        m.namae = m.amae / 180.0;
      } else {
        m.rmse = rmse(truth, guess);
        try {
          m.rrse = rrse(truth, guess);
        } catch (const NumericError&) {
          m.rrse = std::nan("");
          m.rrse_defined = false;
        }
      }
    }
  }
  return out;
}

std::string ModelSpec::name() const {
  std::string base;
  switch (kind) {
    case Kind::persistence: base = "persistence"; break;
    case Kind::nwp: base = "nwp"; break;
    case Kind::lstm_h: base = "lstm-h"; break;
    case Kind::mhstn_t: base = "mhstn-t"; break;
    case Kind::mhstn_s: base = "mhstn-s"; break;
    case Kind::mhstn_e: base = "mhstn-e"; break;
  }
  return covariates ? base + "+c" : base;
}

ModelSpec parse_model(std::string_view name) {
  ModelSpec m;
  if (name.ends_with("+c")) {
    m.covariates = true;
    name.remove_suffix(2);
  }
  if (name == "persistence") m.kind = ModelSpec::Kind::persistence;
  else if (name == "nwp") m.kind = ModelSpec::Kind::nwp;
  else if (name == "lstm-h") m.kind = ModelSpec::Kind::lstm_h;
  else if (name == "mhstn-t") m.kind = ModelSpec::Kind::mhstn_t;
  else if (name == "mhstn-s") m.kind = ModelSpec::Kind::mhstn_s;
  else if (name == "mhstn-e") m.kind = ModelSpec::Kind::mhstn_e;
  else throw ArgumentError("unknown model '" + std::string(name) + "'");
  if (m.covariates && !m.trained()) throw ArgumentError("baselines take no covariates");
  return m;
}

std::vector<ModelSpec> parse_roster(std::string_view csv) {
  std::vector<ModelSpec> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto comma = csv.find(',', start);
    if (comma == std::string_view::npos) comma = csv.size();
    if (comma > start) {
      auto m = parse_model(csv.substr(start, comma - start));
      for (const auto& prev : out) {
        if (prev.name() == m.name()) throw ArgumentError("model listed twice: " + m.name());
      }
      out.push_back(m);
    }
    start = comma + 1;
  }
  if (out.empty()) throw ArgumentError("empty model roster");
  return out;
}

double metric_value(const VariableMetrics& m, std::string_view metric) {
  if (metric == "rmse") return m.rmse;
  if (metric == "rrse") return m.rrse;
  if (metric == "amae") return m.amae;
  if (metric == "namae") return m.namae;
  throw ArgumentError("unknown metric '" + std::string(metric) + "'");
}

Aggregate MetricReport::aggregate(const std::string& model, Variable var, std::string_view metric) const {
  std::vector<double> xs;
  for (const auto& c : cells) {
    if (c.model != model || !c.ok) continue;
    auto it = c.metrics.find(var);
    if (it == c.metrics.end()) continue;
    for (const auto& m : it->second) {
      if (metric == "rrse" && !m.rrse_defined) continue;
      xs.push_back(metric_value(m, metric));
    }
  }
  Aggregate a;
  a.count = xs.size();
  if (xs.empty()) return a;
  for (double x : xs) a.mean += x;
  a.mean /= static_cast<double>(xs.size());
  for (double x : xs) a.std += (x - a.mean) * (x - a.mean);
  a.std = std::sqrt(a.std / static_cast<double>(xs.size()));
  return a;
}

std::size_t MetricReport::failed_cells(const std::string& model) const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [&](const auto& c) { return c.model == model && !c.ok; }));
}

namespace {

using Grid = std::vector<std::vector<std::vector<double>>>;

void run_jobs(std::vector<std::function<void()>>& jobs, std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  if (workers == 1) {
    for (auto& j : jobs) j();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) jobs[i]();
    });
  }
}

Grid theta_from(const Grid& vx, const Grid& vy) {
  Grid out = vx;
  for (std::size_t s = 0; s < vx.size(); ++s)
    for (std::size_t i = 0; i < vx[s].size(); ++i)
      for (std::size_t k = 0; k < vx[s][i].size(); ++k) {
        const double x = vx[s][i][k], y = vy[s][i][k];
        out[s][i][k] = (x == 0.0 && y == 0.0) ? std::nan("") : recover_direction(x, y);
      }
  return out;
}

ForecastBundle baseline_bundle(const WeatherFrame& frame, const std::vector<std::size_t>& origins,
                               std::size_t K, ModelSpec::Kind kind) {
  ForecastBundle b;
  for (auto var : kEvaluatedVariables) {
    Grid g(frame.station_count());
    for (std::size_t s = 0; s < frame.station_count(); ++s) {
      for (auto fct : origins) {
        g[s].push_back(kind == ModelSpec::Kind::persistence ? persistence_forecast(frame, var, s, fct, K)
                                                            : nwp_forecast(frame, var, fct, K));
      }
    }
    b.values[var] = std::move(g);
  }
  return b;
}

WindowSpec spec_for(Variable target, const SelectedSets* sets, std::size_t W, std::size_t K, int fct_hour) {
  WindowSpec spec;
  spec.target = target;
  spec.history = W;
  spec.horizon = K;
  spec.fct_hour = fct_hour;
  if (sets) {
    for (auto v : sets->historical)
      if (v != target) spec.history_covariates.push_back(v);
    for (auto v : sets->future)
      if (v != target) spec.future_covariates.push_back(v);
  }
  return spec;
}

struct FoldContext {
  FoldWindows windows;
  HourRange train;
  NormStats norm;
  std::map<Variable, SelectedSets> selected;
  std::string error;
};

}  // namespace

MetricReport run_experiment(const WeatherFrame& frame, const std::vector<HourRange>& intervals,
                            const SplitPlan& plan, const std::vector<ModelSpec>& roster,
                            const ExperimentConfig& config) {
  if (roster.empty()) throw ArgumentError("run_experiment: empty roster");
  if (config.seeds.empty()) throw ArgumentError("run_experiment: no seeds");
  if (plan.n_intervals != intervals.size()) {
    throw ArgumentError("run_experiment: plan expects " + std::to_string(plan.n_intervals) +
                        " intervals, got " + std::to_string(intervals.size()));
  }
  const TrainConfig& base = config.pipeline.config;
  base.validate();
  const std::size_t K = base.horizon;
  const std::size_t W = base.history;
  const WindowSpec plain = spec_for(Variable::v, nullptr, W, K, config.fct_hour);
  const auto origins = forecast_origins(frame, plain);

  MetricReport report;
  report.mode = plan.mode;
  report.stations = frame.stations();
  report.folds = plan.folds.size();
  report.seeds = config.seeds;
  for (const auto& m : roster) report.models.push_back(m.name());

  const bool any_cov = std::any_of(roster.begin(), roster.end(), [](const auto& m) { return m.covariates; });
  std::vector<FoldContext> folds(plan.folds.size());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    FoldContext& ctx = folds[f];
    try {
      ctx.windows = assign_windows(origins, plain, intervals, plan.folds[f]);
      ctx.train = train_span(intervals, plan.folds[f]);
      if (ctx.windows.test.empty()) throw DataError("no test windows in fold " + std::to_string(f));
      ctx.norm = NormStats::fit(frame, ctx.train);
      if (any_cov) {
        if (config.fixed_covariates) {
          ctx.selected = *config.fixed_covariates;
        } else {
          for (auto target : kSpeedTargets) {
            auto sel = run_covariate_selection(frame, target, ctx.train, K, config.ridge_lambda,
                                               config.covariate_threshold);
            ctx.selected[target] = {sel.historical_selected, sel.future_selected};
          }
        }
      }
    } catch (const std::exception& e) {
      ctx.error = e.what();
    }
  }

  // cells[model][fold][seed]
  const std::size_t n_seeds = config.seeds.size();
  std::vector<std::vector<std::vector<ExperimentCell>>> cells(
      roster.size(), std::vector<std::vector<ExperimentCell>>(plan.folds.size(), std::vector<ExperimentCell>(n_seeds)));
  for (std::size_t m = 0; m < roster.size(); ++m)
    for (std::size_t f = 0; f < plan.folds.size(); ++f)
      for (std::size_t s = 0; s < n_seeds; ++s) {
        auto& c = cells[m][f][s];
        c.model = roster[m].name();
        c.fold = f;
        c.seed = config.seeds[s];
        if (!folds[f].error.empty()) {
          c.ok = false;
          c.reason = folds[f].error;
        }
      }

  std::vector<std::function<void()>> jobs;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    if (!folds[f].error.empty()) continue;
    // Baselines need no training and are shared by all seeds.
    for (std::size_t m = 0; m < roster.size(); ++m) {
      if (roster[m].trained()) continue;
      jobs.emplace_back([&, m, f] {
        ExperimentCell result = cells[m][f][0];
        try {
          const auto bundle = baseline_bundle(frame, folds[f].windows.test, K, roster[m].kind);
          result.metrics = score_forecasts(frame, folds[f].windows.test, K, bundle, config.clip_speed);
        } catch (const std::exception& e) {
          result.ok = false;
          result.reason = e.what();
        }
        for (std::size_t s = 0; s < n_seeds; ++s) {
          const auto seed = cells[m][f][s].seed;
          cells[m][f][s] = result;
          cells[m][f][s].seed = seed;
        }
      });
    }
    // One training group per (covariates, history-only) pair; each MHSTN
    // level of a group comes from the same trained pipeline.
    for (int cov = 0; cov < 2; ++cov) {
      for (int history_only = 0; history_only < 2; ++history_only) {
        std::vector<std::size_t> members;
        Stage last = Stage::temporal;
        for (std::size_t m = 0; m < roster.size(); ++m) {
          const auto& spec = roster[m];
          if (!spec.trained() || spec.covariates != static_cast<bool>(cov)) continue;
          if ((spec.kind == ModelSpec::Kind::lstm_h) != static_cast<bool>(history_only)) continue;
          members.push_back(m);
          if (spec.kind == ModelSpec::Kind::mhstn_s) last = std::max(last, Stage::spatial);
          if (spec.kind == ModelSpec::Kind::mhstn_e) last = Stage::ensemble;
        }
        if (members.empty()) continue;
        for (std::size_t s = 0; s < n_seeds; ++s) {
          jobs.emplace_back([&, members, last, cov, history_only, f, s] {
            const FoldContext& ctx = folds[f];
            try {
              PipelineOptions options = config.pipeline;
              options.config.seed = derive_seed(config.seeds[s], {f, static_cast<std::uint64_t>(cov),
                                                                  static_cast<std::uint64_t>(history_only)});
              options.last_stage = last;
              options.use_future = !history_only;
              if (ctx.windows.train.empty() || ctx.windows.validation.empty()) {
                throw DataError("fold " + std::to_string(f) + " has no training or validation windows");
              }
              std::map<Variable, StationNets> nets;
              for (auto target : kSpeedTargets) {
                const SelectedSets* sets = cov ? &ctx.selected.at(target) : nullptr;
                const WindowSpec spec = spec_for(target, sets, W, K, config.fct_hour);
                nets.emplace(target, train_pipeline(frame, spec, ctx.windows.train, ctx.windows.validation,
                                                    ctx.norm, options));
              }
              for (auto m : members) {
                Level level = Level::temporal;
                if (roster[m].kind == ModelSpec::Kind::mhstn_s) level = Level::spatial;
                if (roster[m].kind == ModelSpec::Kind::mhstn_e) level = Level::ensemble;
                ForecastBundle bundle;
                for (auto target : kSpeedTargets) {
                  bundle.values[target] = forecast(nets.at(target), frame, ctx.windows.test, level);
                }
                bundle.values[Variable::theta] =
                    theta_from(bundle.values.at(Variable::vx), bundle.values.at(Variable::vy));
                cells[m][f][s].metrics =
                    score_forecasts(frame, ctx.windows.test, K, bundle, config.clip_speed);
              }
            } catch (const std::exception& e) {
              for (auto m : members) {
                cells[m][f][s].ok = false;
                cells[m][f][s].reason = e.what();
              }
            }
          });
        }
      }
    }
  }
  run_jobs(jobs, config.jobs);

  for (auto& per_model : cells)
    for (auto& per_fold : per_model)
      for (auto& c : per_fold) report.cells.push_back(std::move(c));
  return report;
}

namespace {

std::string cell_text(const Aggregate& a) {
  if (a.count == 0) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f ± %.4f", a.mean, a.std);
  return buf;
}

constexpr std::array<std::pair<Variable, const char*>, 8> kColumns{{{Variable::v, "rmse"},
                                                                   {Variable::vx, "rmse"},
                                                                   {Variable::vy, "rmse"},
                                                                   {Variable::theta, "amae"},
                                                                   {Variable::v, "rrse"},
                                                                   {Variable::vx, "rrse"},
                                                                   {Variable::vy, "rrse"},
                                                                   {Variable::theta, "namae"}}};

}  // namespace

void write_metric_report(const std::filesystem::path& path, const MetricReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "mode = " << split_mode_name(report.mode) << '\n';
  out << "folds = " << report.folds << '\n';
  out << "seeds = ";
  for (std::size_t i = 0; i < report.seeds.size(); ++i) out << (i ? "," : "") << report.seeds[i];
  out << "\nstations = ";
  for (std::size_t i = 0; i < report.stations.size(); ++i) out << (i ? "," : "") << report.stations[i];
  out << "\nmodels = ";
  for (std::size_t i = 0; i < report.models.size(); ++i) out << (i ? "," : "") << report.models[i];
  out << "\n\n[cells]\nmodel\tcells\tfailed\n";
  for (const auto& m : report.models) {
    const auto total = std::count_if(report.cells.begin(), report.cells.end(),
                                     [&](const auto& c) { return c.model == m; });
    out << m << '\t' << total << '\t' << report.failed_cells(m) << '\n';
  }
  bool any_failed = false;
  for (const auto& c : report.cells) {
    if (c.ok) continue;
    if (!any_failed) out << "\n[failures]\nmodel\tfold\tseed\treason\n";
    any_failed = true;
    out << c.model << '\t' << c.fold << '\t' << c.seed << '\t' << c.reason << '\n';
  }
  out << "\n[table]\nmodel";
  for (const auto& [var, metric] : kColumns) out << '\t' << variable_name(var) << '.' << metric;
  out << '\n';
  for (const auto& m : report.models) {
    out << m;
    for (const auto& [var, metric] : kColumns) out << '\t' << cell_text(report.aggregate(m, var, metric));
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_cell_metrics(const std::filesystem::path& path, const MetricReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "model,fold,seed,station,variable,metric,value\n";
  char buf[40];
  for (const auto& c : report.cells) {
    if (!c.ok) continue;
    for (const auto& [var, per_station] : c.metrics) {
      for (std::size_t s = 0; s < per_station.size(); ++s) {
        const bool direction = var == Variable::theta;
        for (const char* metric : direction ? std::array{"amae", "namae"} : std::array{"rmse", "rrse"}) {
          std::snprintf(buf, sizeof buf, "%.17g", metric_value(per_station[s], metric));
          out << c.model << ',' << c.fold << ',' << c.seed << ',' << report.stations[s] << ','
              << variable_name(var) << ',' << metric << ',' << buf << '\n';
        }
      }
    }
  }
}

}  // namespace mhstn
