// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mhstn/errors.hpp"
#include "mhstn/evaluation.hpp"
#include "mhstn/synth.hpp"
#include "support.hpp"

using namespace mhstn;
using namespace mhstn::testing;

namespace {

double diurnal(std::size_t t, std::size_t s) {
  return 5.0 + 2.0 * std::sin(2.0 * std::acos(-1.0) * static_cast<double>(t % 24) / 24.0) + 0.3 * static_cast<double>(s);
}

// Wrapped absolute angle difference by explicit case analysis.
double brute_delta(double a, double b) {
  double d = a > b ? a - b : b - a;
  if (d > 180.0) d = 360.0 - d;
  return d;
}

}  // namespace

TEST_CASE("rmse examples") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(rmse(a, a) == 0.0);
  CHECK(rmse(a, std::vector<double>{3.0, 4.0, 5.0}) == doctest::Approx(2.0));
  CHECK(rmse(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}) == doctest::Approx(std::sqrt(12.5)));
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), ArgumentError);
  CHECK_THROWS_AS(rmse(a, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("amae and namae examples") {
  CHECK(amae(std::vector<double>{10.0}, std::vector<double>{350.0}) == doctest::Approx(20.0));
  CHECK(amae(std::vector<double>{10.0}, std::vector<double>{40.0}) == doctest::Approx(30.0));
  CHECK(amae(std::vector<double>{90.0}, std::vector<double>{90.0}) == 0.0);
  CHECK(amae(std::vector<double>{90.0}, std::vector<double>{270.0}) == doctest::Approx(180.0));
  CHECK(amae(std::vector<double>{360.0}, std::vector<double>{180.0}) == doctest::Approx(180.0));
  CHECK(namae(std::vector<double>{10.0}, std::vector<double>{350.0}) == doctest::Approx(20.0 / 180.0));
  CHECK(namae(std::vector<double>{10.0}, std::vector<double>{190.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(amae(std::vector<double>{0.0}, std::vector<double>{10.0}), ArgumentError);
  CHECK_THROWS_AS(amae(std::vector<double>{10.0}, std::vector<double>{360.5}), ArgumentError);

  Rng rng(4);
  std::uniform_real_distribution<double> angle(1e-9, 360.0);
  for (int i = 0; i < 500; ++i) {
    const double a = angle(rng);
    const double b = angle(rng);
    const double d = amae(std::vector<double>{a}, std::vector<double>{b});
    CHECK(d == doctest::Approx(brute_delta(a, b)).epsilon(1e-12));
    CHECK(d == amae(std::vector<double>{b}, std::vector<double>{a}));
    CHECK(d >= 0.0);
    CHECK(d <= 180.0);
  }
}

TEST_CASE("rrse examples") {
  const std::vector<double> truth{1.0, 3.0, 2.0, 6.0};
  const std::vector<double> naive(4, 3.0);
  CHECK(rrse(truth, naive) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rrse(truth, truth) == 0.0);
  // Moving every naive prediction by a factor 1 - 1/sqrt(2) toward the truth
  // halves the squared error.
  std::vector<double> half(4);
  const double a = 1.0 - 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 4; ++i) half[i] = naive[i] + a * (truth[i] - naive[i]);
  CHECK(rrse(truth, half) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(rrse(std::vector<double>{2.0, 2.0}, std::vector<double>{1.0, 3.0}), NumericError);

  Rng rng(9);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> y(30);
    for (auto& x : y) x = n(rng);
    double mean = 0.0;
    for (double x : y) mean += x;
    mean /= 30.0;
    CHECK(rrse(y, std::vector<double>(30, mean)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("persistence baseline") {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> day(24);
    for (auto& x : day) x = u(rng);
    const auto frame = make_frame(24 * 4, 2, [&](std::size_t t, std::size_t s) { return day[t % 24] + s; },
                                  [](std::size_t) { return 1.0; });
    for (std::size_t fct = 23; fct + 24 < frame.length(); fct += 5) {
      for (std::size_t s = 0; s < 2; ++s) {
        const auto p = persistence_forecast(frame, Variable::v, s, fct, 24);
        std::vector<double> truth;
        for (std::size_t k = 1; k <= 24; ++k) truth.push_back(frame.obs(fct + k, Variable::v, s));
        CHECK(rmse(truth, p) < 1e-12);
      }
    }
  }
  const auto frame = make_frame(24 * 3, 1, diurnal, [](std::size_t) { return 1.0; });
  const auto p = persistence_forecast(frame, Variable::v, 0, 47, 24);
  for (std::size_t k = 0; k < 24; ++k) CHECK(p[k] == frame.obs(24 + k, Variable::v, 0));
  CHECK_THROWS_AS(persistence_forecast(frame, Variable::v, 0, 10, 24), ArgumentError);
  CHECK_THROWS_AS(persistence_forecast(frame, Variable::v, 0, 47, 25), ArgumentError);
}

TEST_CASE("nwp baseline") {
  const double b = -0.7;
  const auto exact = make_frame(24 * 3, 1, diurnal, [](std::size_t t) { return diurnal(t, 0); });
  const auto biased = make_frame(24 * 3, 1, diurnal, [&](std::size_t t) { return diurnal(t, 0) + b; });
  std::vector<double> truth;
  for (std::size_t k = 1; k <= 24; ++k) truth.push_back(exact.obs(30 + k, Variable::v, 0));
  CHECK(rmse(truth, nwp_forecast(exact, Variable::v, 30, 24)) == 0.0);
  CHECK(rmse(truth, nwp_forecast(biased, Variable::v, 30, 24)) == doctest::Approx(std::abs(b)).epsilon(1e-12));
  CHECK_THROWS_AS(nwp_forecast(exact, Variable::v, 60, 24), DataError);
}

TEST_CASE("roster parsing") {
  const auto roster = parse_roster("persistence,nwp,lstm-h,mhstn-t,mhstn-s,mhstn-e,mhstn-e+c");
  REQUIRE(roster.size() == 7);
  CHECK(roster[6].name() == "mhstn-e+c");
  CHECK(roster[6].covariates);
  CHECK_FALSE(roster[0].trained());
  CHECK(roster[2].trained());
  CHECK_THROWS_AS(parse_model("nwp+c"), ArgumentError);
  CHECK_THROWS_AS(parse_model("arima"), ArgumentError);
  CHECK_THROWS_AS(parse_roster("nwp,nwp"), ArgumentError);
}

TEST_CASE("experiment bookkeeping and aggregation") {
  SynthSpec spec;
  spec.stations = 2;
  spec.days = 12;
  spec.seed = 8;
  const auto frame = synthesize(spec);
  const auto intervals = day_intervals(frame, 2);
  const auto plan = plan_splits(intervals.size(), SplitMode::rolling, 2, 3);
  ExperimentConfig config;
  config.seeds = {4, 9};
  config.pipeline.config.max_epochs = 3;
  config.pipeline.lstm_hidden = 4;
  config.pipeline.spatial_filters = 4;
  const auto roster = parse_roster("nwp,mhstn-t");
  const auto report = run_experiment(frame, intervals, plan, roster, config);
  REQUIRE(report.cells.size() == 8);
  CHECK(report.folds == 2);
  CHECK(report.failed_cells("nwp") == 0);
  CHECK(report.failed_cells("mhstn-t") == 0);

  std::map<std::pair<std::string, std::size_t>, std::vector<const ExperimentCell*>> by_fold;
  for (const auto& c : report.cells) by_fold[{c.model, c.fold}].push_back(&c);
  for (std::size_t f = 0; f < 2; ++f) {
    const auto& nwp = by_fold[{"nwp", f}];
    REQUIRE(nwp.size() == 2);
    CHECK(nwp[0]->seed != nwp[1]->seed);
    for (auto var : kEvaluatedVariables) {
      for (std::size_t s = 0; s < 2; ++s) {
        CHECK(nwp[0]->metrics.at(var)[s].rmse == nwp[1]->metrics.at(var)[s].rmse);
        CHECK(nwp[0]->metrics.at(var)[s].amae == nwp[1]->metrics.at(var)[s].amae);
      }
    }
  }

  for (const auto& model : report.models) {
    for (auto [var, metric] : {std::pair{Variable::v, "rmse"}, {Variable::vy, "rrse"}, {Variable::theta, "amae"}}) {
      std::vector<double> values;
      for (const auto& c : report.cells)
        if (c.model == model) for (const auto& m : c.metrics.at(var)) values.push_back(metric_value(m, metric));
      double mean = 0.0;
      for (double x : values) mean += x;
      mean /= static_cast<double>(values.size());
      double var_sum = 0.0;
      for (double x : values) var_sum += (x - mean) * (x - mean);
      const auto agg = report.aggregate(model, var, metric);
      CHECK(agg.count == 8);
      CHECK(std::abs(agg.mean - mean) < 1e-12);
      CHECK(std::abs(agg.std - std::sqrt(var_sum / static_cast<double>(values.size()))) < 1e-12);
    }
  }

  // Independent recomputation of the nwp cells from the raw frame.
  WindowSpec ws;
  for (std::size_t f = 0; f < 2; ++f) {
    const auto windows = assign_windows(forecast_origins(frame, ws), ws, intervals, plan.folds[f]);
    for (std::size_t s = 0; s < 2; ++s) {
      double sq = 0.0;
      std::size_t n = 0;
      for (auto o : windows.test)
        for (std::size_t k = 1; k <= 24; ++k) {
          const double d = frame.nwp(o + k, Variable::v) - frame.obs(o + k, Variable::v, s);
          sq += d * d;
          ++n;
        }
      CHECK(std::abs(by_fold[{"nwp", f}][0]->metrics.at(Variable::v)[s].rmse - std::sqrt(sq / n)) < 1e-12);
    }
  }

  const auto dir = std::filesystem::temp_directory_path();
  write_metric_report(dir / "mhstn_report.txt", report);
  write_cell_metrics(dir / "mhstn_cells.csv", report);
  std::ifstream in(dir / "mhstn_cells.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "model,fold,seed,station,variable,metric,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8 * 2 * 4 * 2);
  std::ifstream rin(dir / "mhstn_report.txt");
  std::stringstream text;
  text << rin.rdbuf();
  CHECK(text.str().find("[table]") != std::string::npos);
  CHECK(text.str().find("mhstn-t") != std::string::npos);
}

TEST_CASE("metrics agree with a recomputation from the prediction dump") {
  SynthSpec spec;
  spec.stations = 2;
  spec.days = 10;
  spec.seed = 3;
  const auto frame = synthesize(spec);
  const auto intervals = day_intervals(frame, 2);
  const auto plan = plan_splits(intervals.size(), SplitMode::incremental, 1, 3);
  WindowSpec ws;
  const auto windows = assign_windows(forecast_origins(frame, ws), ws, intervals, plan.folds[0]);
  const auto norm = NormStats::fit(frame, train_span(intervals, plan.folds[0]));
  PipelineOptions options;
  options.config.max_epochs = 3;
  options.lstm_hidden = 4;
  options.spatial_filters = 4;
  std::map<Variable, StationNets> nets;
  for (auto target : kSpeedTargets) {
    WindowSpec t = ws;
    t.target = target;
    nets.emplace(target, train_pipeline(frame, t, windows.train, windows.validation, norm, options));
  }
  const auto set = predict(nets.at(Variable::v), nets.at(Variable::vx), nets.at(Variable::vy), frame,
                           windows.test);
  const auto path = std::filesystem::temp_directory_path() / "mhstn_eval_dump.csv";
  write_prediction_dump(path, set, frame);

  ForecastBundle bundle;
  bundle.values[Variable::v] = set.v;
  bundle.values[Variable::vx] = set.vx;
  bundle.values[Variable::vy] = set.vy;
  bundle.values[Variable::theta] = set.theta;
  const auto metrics = score_forecasts(frame, windows.test, 24, bundle);

  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> rows;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string fct, station, horizon, variable, truth, pred;
    std::getline(ss, fct, ',');
    std::getline(ss, station, ',');
    std::getline(ss, horizon, ',');
    std::getline(ss, variable, ',');
    std::getline(ss, truth, ',');
    std::getline(ss, pred, ',');
    if (pred.empty()) continue;
    rows[{station, variable}].emplace_back(std::stod(truth), std::stod(pred));
  }
  for (std::size_t s = 0; s < 2; ++s) {
    const auto station = frame.stations()[s];
    for (auto var : {Variable::v, Variable::vx, Variable::vy}) {
      const auto& r = rows.at({station, std::string(variable_name(var))});
      double sq = 0.0, mean = 0.0, dev = 0.0;
      for (auto [y, p] : r) {
        sq += (y - p) * (y - p);
        mean += y;
      }
      mean /= static_cast<double>(r.size());
      for (auto [y, p] : r) dev += (y - mean) * (y - mean);
      CHECK(std::abs(metrics.at(var)[s].rmse - std::sqrt(sq / r.size())) < 1e-12);
      CHECK(std::abs(metrics.at(var)[s].rrse - std::sqrt(sq / dev)) < 1e-12);
    }
    const auto& r = rows.at({station, "theta"});
    double total = 0.0;
    for (auto [y, p] : r) total += brute_delta(y, p);
    CHECK(std::abs(metrics.at(Variable::theta)[s].amae - total / r.size()) < 1e-12);
  }
}
