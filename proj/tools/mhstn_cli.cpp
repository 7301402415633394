// SPDX-License-Identifier: Apache-2.0
// mhstn: synth | prepare | select-covariates | train | predict | evaluate | diagnose
#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "mhstn/checkpoint.hpp"
#include "mhstn/config.hpp"
#include "mhstn/covariates.hpp"
#include "mhstn/diagnostics.hpp"
#include "mhstn/errors.hpp"
#include "mhstn/evaluation.hpp"
#include "mhstn/synth.hpp"

using namespace mhstn;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kIo = 3, kData = 4, kArgument = 5 };

void ensure_parent(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& what) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty()) {
    throw ArgumentError(what + ": not a non-negative integer: '" + text + "'");
  }
  return x;
}

WeatherFrame frame_of(const Config& cfg) { return load_frame(cfg.path("observations"), cfg.path("nwp")); }

std::vector<HourRange> intervals_of(const WeatherFrame& frame, const Config& cfg) {
  const std::string& unit = cfg.str("interval");
  if (unit == "month") return month_intervals(frame);
  if (unit.rfind("days:", 0) == 0) {
    return day_intervals(frame, parse_unsigned(unit.substr(5), "interval"));
  }
  throw ArgumentError("interval: expected month or days:N, got '" + unit + "'");
}

SplitPlan plan_of(std::size_t n_intervals, const Config& cfg) {
  return plan_splits(n_intervals, parse_split_mode(cfg.str("split_mode")), cfg.count("n_folds"),
                     cfg.count("history_intervals"));
}

const Fold& fold_of(const SplitPlan& plan, const Config& cfg) {
  const auto f = cfg.integer("fold");
  if (f < 0) return plan.folds.back();
  if (static_cast<std::size_t>(f) >= plan.folds.size()) {
    throw ArgumentError("fold " + std::to_string(f) + " outside the " + std::to_string(plan.folds.size()) +
                        "-fold plan");
  }
  return plan.folds[static_cast<std::size_t>(f)];
}

Stage stage_of(const std::string& s) {
  if (s == "temporal") return Stage::temporal;
  if (s == "spatial") return Stage::spatial;
  if (s == "ensemble") return Stage::ensemble;
  throw ArgumentError("unknown stage '" + s + "'");
}

TrainConfig train_config_of(const Config& cfg) {
  TrainConfig c;
  c.lr_init = cfg.real("lr_init");
  c.lr_factor = cfg.real("lr_factor");
  c.lr_patience = cfg.count("lr_patience");
  c.lr_min = cfg.real("lr_min");
  c.batch = cfg.count("batch");
  c.early_stop_patience = cfg.count("early_stop_patience");
  c.max_epochs = cfg.count("max_epochs");
  c.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  c.horizon = cfg.count("horizon");
  c.history = cfg.count("history");
  c.validate();
  return c;
}

PipelineOptions options_of(const Config& cfg) {
  PipelineOptions o;
  o.config = train_config_of(cfg);
  o.last_stage = stage_of(cfg.str("stage"));
  o.lstm_hidden = cfg.count("lstm_hidden");
  o.future_expansion = cfg.count("future_expansion");
  o.spatial_filters = cfg.count("filters");
  o.spatial_kernel = cfg.count("kernel");
  return o;
}

WindowSpec base_spec(const Config& cfg, Variable target) {
  WindowSpec spec;
  spec.target = target;
  spec.history = cfg.count("history");
  spec.horizon = cfg.count("horizon");
  spec.fct_hour = static_cast<int>(cfg.integer("fct_hour"));
  return spec;
}

struct FoldData {
  WeatherFrame frame;
  std::vector<HourRange> intervals;
  SplitPlan plan;
  Fold fold;
  FoldWindows windows;
};

FoldData fold_data(const Config& cfg) {
  WeatherFrame frame = frame_of(cfg);
  auto intervals = intervals_of(frame, cfg);
  auto plan = plan_of(intervals.size(), cfg);
  Fold fold = fold_of(plan, cfg);
  const auto spec = base_spec(cfg, Variable::v);
  auto windows = assign_windows(forecast_origins(frame, spec), spec, intervals, fold);
  return {std::move(frame), std::move(intervals), std::move(plan), std::move(fold), std::move(windows)};
}

int cmd_synth(const Config& cfg) {
  SynthSpec s;
  s.stations = cfg.count("synth_stations");
  s.days = cfg.count("synth_days");
  s.start = cfg.str("synth_start");
  s.base_speed = cfg.real("synth_base_speed");
  s.diurnal_amplitude = cfg.real("synth_diurnal_amplitude");
  s.ar_coefficient = cfg.real("synth_ar_coefficient");
  s.noise_scale = cfg.real("synth_noise_scale");
  s.regional_noise = cfg.real("synth_regional_noise");
  s.spatial_strength = cfg.real("synth_spatial_strength");
  s.nwp_bias = cfg.real("synth_nwp_bias");
  s.station_offset = cfg.real("synth_station_offset");
  s.nwp_noise = cfg.real("synth_nwp_noise");
  s.direction_noise = cfg.real("synth_direction_noise");
  s.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  write_synth(cfg.path("data_dir"), s);
  std::cout << (cfg.path("data_dir") / "observations.csv").string() << '\n'
            << (cfg.path("data_dir") / "nwp.csv").string() << '\n';
  return kOk;
}

int cmd_prepare(const Config& cfg) {
  const WeatherFrame frame = frame_of(cfg);
  const auto dir = cfg.path("data_dir");
  std::filesystem::create_directories(dir);
  write_observations(dir / "clean_observations.csv", frame);
  write_nwp(dir / "clean_nwp.csv", frame);
  const auto intervals = intervals_of(frame, cfg);
  {
    std::ofstream out(dir / "intervals.csv");
    if (!out) throw IoError("cannot write " + (dir / "intervals.csv").string());
    out << "interval,begin,end\n";
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      out << i << ',' << format_timestamp(frame.timeline()[intervals[i].begin]) << ','
          << format_timestamp(frame.timeline()[intervals[i].end - 1]) << '\n';
    }
  }
  const auto plan = plan_of(intervals.size(), cfg);
  const auto spec = base_spec(cfg, Variable::v);
  const auto origins = forecast_origins(frame, spec);
  std::ofstream out(dir / "folds.csv");
  if (!out) throw IoError("cannot write " + (dir / "folds.csv").string());
  out << "fold,role,intervals,windows\n";
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& fold = plan.folds[f];
    const auto w = assign_windows(origins, spec, intervals, fold);
    std::string ids;
    for (std::size_t i = 0; i < fold.train.size(); ++i) ids += (i ? " " : "") + std::to_string(fold.train[i]);
    out << f << ",train," << ids << ',' << w.train.size() << '\n';
    out << f << ",validation," << fold.validation << ',' << w.validation.size() << '\n';
    out << f << ",test," << fold.test << ',' << w.test.size() << '\n';
  }
  std::cout << frame.length() << " hours, " << frame.station_count() << " stations, " << intervals.size()
            << " intervals, " << plan.folds.size() << " folds\n";
  return kOk;
}

int cmd_select(const Config& cfg) {
  const FoldData d = fold_data(cfg);
  const HourRange range = train_span(d.intervals, d.fold);
  std::vector<CovariateSelection> selections;
  for (auto target : kSpeedTargets) {
    selections.push_back(run_covariate_selection(d.frame, target, range, cfg.count("horizon"),
                                                 cfg.real("ridge_lambda"), cfg.real("covariate_threshold")));
  }
  ensure_parent(cfg.path("covariates"));
  write_covariate_report(cfg.path("covariates"), selections, cfg.real("covariate_threshold"));
  for (const auto& s : selections) {
    std::cout << variable_name(s.target) << ": historical " << join_variables(s.historical_selected)
              << "; future " << join_variables(s.future_selected) << '\n';
  }
  return kOk;
}

int cmd_train(const Config& cfg) {
  const FoldData d = fold_data(cfg);
  if (d.windows.train.empty() || d.windows.validation.empty()) {
    throw DataError("fold has no training or validation windows");
  }
  const NormStats norm = NormStats::fit(d.frame, train_span(d.intervals, d.fold));
  std::optional<std::map<Variable, SelectedSets>> selected;
  if (cfg.flag("use_covariates")) selected = read_covariate_report(cfg.path("covariates"));
  const PipelineOptions options = options_of(cfg);
  ensure_parent(cfg.path("training_log"));
  std::ofstream log(cfg.path("training_log"));
  if (!log) throw IoError("cannot write " + cfg.path("training_log").string());
  log << "target,station,stage,epochs,best_epoch,best_validation,stopped_early\n";
  std::size_t files = 0;
  for (auto target : kSpeedTargets) {
    WindowSpec spec = base_spec(cfg, target);
    if (selected) {
      const auto it = selected->find(target);
      if (it == selected->end()) {
        throw DataError("covariate report has no section for " + std::string(variable_name(target)));
      }
      for (auto v : it->second.historical)
        if (v != target) spec.history_covariates.push_back(v);
      for (auto v : it->second.future)
        if (v != target) spec.future_covariates.push_back(v);
    }
    PipelineReport report;
    PipelineOptions o = options;
    o.config.seed = derive_seed(options.config.seed, {index_of(target)});
    const auto nets = train_pipeline(d.frame, spec, d.windows.train, d.windows.validation, norm, o, &report);
    files += save_station_nets(cfg.path("checkpoints"), nets).size();
    for (std::size_t st = 0; st < report.records.size(); ++st) {
      for (std::size_t s = 0; s < report.records[st].size(); ++s) {
        const auto& r = report.records[st][s];
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", r.best_validation);
        log << variable_name(target) << ',' << d.frame.stations()[s] << ','
            << stage_name(static_cast<Stage>(st + 1)) << ',' << r.epochs << ',' << r.best_epoch << ','
            << buf << ',' << (r.stopped_early ? "true" : "false") << '\n';
      }
    }
  }
  std::cout << files << " checkpoint files in " << cfg.path("checkpoints").string() << '\n';
  return kOk;
}

Level level_of(const std::string& s) {
  switch (stage_of(s)) {
    case Stage::temporal: return Level::temporal;
    case Stage::spatial: return Level::spatial;
    case Stage::ensemble: return Level::ensemble;
  }
  return Level::ensemble;
}

int cmd_predict(const Config& cfg) {
  const FoldData d = fold_data(cfg);
  const auto dir = cfg.path("checkpoints");
  const auto v = load_station_nets(dir, Variable::v);
  const auto vx = load_station_nets(dir, Variable::vx);
  const auto vy = load_station_nets(dir, Variable::vy);
  if (d.windows.test.empty()) throw DataError("fold has no test windows");
  const auto set = predict(v, vx, vy, d.frame, d.windows.test, level_of(cfg.str("level")));
  ensure_parent(cfg.path("predictions"));
  write_prediction_dump(cfg.path("predictions"), set, d.frame);
  std::cout << d.windows.test.size() << " forecasts written to " << cfg.path("predictions").string() << '\n';
  return kOk;
}

int cmd_evaluate(const Config& cfg) {
  const WeatherFrame frame = frame_of(cfg);
  const auto intervals = intervals_of(frame, cfg);
  const auto plan = plan_of(intervals.size(), cfg);
  const auto roster = parse_roster(cfg.str("models"));
  ExperimentConfig ec;
  ec.pipeline = options_of(cfg);
  ec.seeds.clear();
  for (const auto& s : cfg.list("seeds")) ec.seeds.push_back(parse_unsigned(s, "seeds"));
  ec.fct_hour = static_cast<int>(cfg.integer("fct_hour"));
  ec.ridge_lambda = cfg.real("ridge_lambda");
  ec.covariate_threshold = cfg.real("covariate_threshold");
  ec.clip_speed = cfg.flag("clip_speed");
  ec.jobs = cfg.count("jobs");
  const auto report = run_experiment(frame, intervals, plan, roster, ec);
  ensure_parent(cfg.path("report"));
  write_metric_report(cfg.path("report"), report);
  ensure_parent(cfg.path("cell_metrics"));
  write_cell_metrics(cfg.path("cell_metrics"), report);
  std::ifstream in(cfg.path("report"));
  std::cout << in.rdbuf();
  return kOk;
}

int cmd_diagnose(const Config& cfg) {
  const WeatherFrame frame = frame_of(cfg);
  const std::string& id = cfg.str("diag_station");
  const std::size_t station = id.empty() ? 0 : frame.station_index(id);
  const auto curves =
      correlation_diagnostics(frame, parse_variable(cfg.str("diag_variable")), cfg.count("max_lag"), station);
  ensure_parent(cfg.path("diagnostics"));
  write_diagnostics(cfg.path("diagnostics"), curves);
  std::cout << curves.size() << " curves written to " << cfg.path("diagnostics").string() << '\n';
  return kOk;
}

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int fail(int code, std::string_view kind, const std::string& message) {
  std::cerr << "error: " << kind << ": " << one_line(message) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-horizon spatio-temporal wind forecasting"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  app.add_option("--config", config_file, "key = value configuration file");
  std::map<std::string, std::string> flags;
  for (const auto& key : config_keys()) {
    app.add_option("--" + key.name, flags[key.name], key.help + " (default: " + key.default_value + ")");
  }
  const std::vector<std::pair<std::string, std::string>> commands{
      {"synth", "write a synthetic observation/NWP pair"},
      {"prepare", "clean the input files and summarise intervals and folds"},
      {"select-covariates", "rank covariates on the training span and write the report"},
      {"train", "train the v, vx and vy pipelines and write checkpoints"},
      {"predict", "forecast the test windows from checkpoints"},
      {"evaluate", "run the fold x seed experiment and write the metric report"},
      {"diagnose", "write auto, cross and spatial correlation curves"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  try {
    Config cfg;
    if (!config_file.empty()) cfg.load_file(config_file);
    for (const auto& key : config_keys()) {
      if (app.count("--" + key.name) > 0) cfg.set(key.name, flags[key.name]);
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "synth") return cmd_synth(cfg);
    if (cmd == "prepare") return cmd_prepare(cfg);
    if (cmd == "select-covariates") return cmd_select(cfg);
    if (cmd == "train") return cmd_train(cfg);
    if (cmd == "predict") return cmd_predict(cfg);
    if (cmd == "evaluate") return cmd_evaluate(cfg);
    if (cmd == "diagnose") return cmd_diagnose(cfg);
    return fail(kUsage, "usage", "unknown subcommand " + cmd);
  } catch (const IoError& e) {
    return fail(kIo, "io", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kIo, "io", e.what());
  } catch (const DataError& e) {
    return fail(kData, "data", e.what());
  } catch (const ArgumentError& e) {
    return fail(kArgument, "argument", e.what());
  } catch (const DimensionError& e) {
    return fail(kArgument, "dimension", e.what());
  } catch (const NumericError& e) {
    return fail(kArgument, "numeric", e.what());
  } catch (const StateError& e) {
    return fail(kArgument, "state", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}
