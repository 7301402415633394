// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "mhstn/diagnostics.hpp"
#include "mhstn/errors.hpp"
#include "mhstn/series.hpp"
#include "mhstn/splits.hpp"
#include "mhstn/wind.hpp"
#include "mhstn/windows.hpp"
#include "support.hpp"

using namespace mhstn;
using namespace mhstn::testing;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mhstn_test_data_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

WeatherFrame days_frame(std::size_t days, std::size_t stations = 1) {
  return make_frame(
      days * 24, stations, [](std::size_t t, std::size_t s) { return 3.0 + std::sin(0.3 * t) + 0.1 * s; },
      [](std::size_t t) { return 3.0 + std::cos(0.2 * t); });
}

}  // namespace

TEST_CASE("decompose_wind examples") {
  auto w = decompose_wind(1.0, 90.0);
  CHECK(w.vx == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(w.vy) < 1e-15);
  w = decompose_wind(1.0, 360.0);
  CHECK(std::abs(w.vx) < 1e-15);
  CHECK(w.vy == doctest::Approx(-1.0).epsilon(1e-15));
  w = decompose_wind(2.0, 45.0);
  CHECK(w.vx == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  CHECK(w.vy == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(decompose_wind(-0.1, 10.0), ArgumentError);
}

TEST_CASE("recover_direction examples") {
  const double h = std::sqrt(2.0) / 2.0;
  CHECK(recover_direction(-h, -h) == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(recover_direction(h, -h) == doctest::Approx(315.0).epsilon(1e-12));
  CHECK(recover_direction(h, h) == doctest::Approx(225.0).epsilon(1e-12));
  CHECK(recover_direction(-1.0, 0.0) == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(recover_direction(1.0, 0.0) == doctest::Approx(270.0).epsilon(1e-12));
  CHECK(recover_direction(0.0, -1.0) == 360.0);
  CHECK_THROWS_AS(recover_direction(0.0, 0.0), ArgumentError);
  for (double theta = 0.5; theta <= 360.0; theta += 7.25) {
    for (double v : {0.1, 1.0, 17.0}) {
      const auto w = decompose_wind(v, theta);
      CHECK(std::abs(recover_direction(w.vx, w.vy) - theta) < 1e-9);
    }
  }
  CHECK(canonical_direction(0.0) == 360.0);
  CHECK(canonical_direction(-90.0) == 270.0);
  CHECK(canonical_direction(725.0) == doctest::Approx(5.0));
}

TEST_CASE("fill_missing examples") {
  const double M = kMissing;
  CHECK(fill_missing(std::vector<double>{1, M, 3}) == std::vector<double>{1, 2, 3});
  CHECK(fill_missing(std::vector<double>{M, 5, 5}) == std::vector<double>{5, 5, 5});
  CHECK(fill_missing(std::vector<double>{4, 2, 7}) == std::vector<double>{4, 2, 7});
  CHECK(fill_missing(std::vector<double>{1, M, M, 7, M}) == std::vector<double>{1, 4, 4, 7, 7});
  CHECK_THROWS_AS(fill_missing(std::vector<double>{M, M}), DataError);

  const auto d = fill_missing_direction(std::vector<double>{350, M, 10});
  CHECK(d[1] == doctest::Approx(360.0));
  CHECK(fill_missing_direction(std::vector<double>{80, M, 100})[1] == doctest::Approx(90.0));
  CHECK_THROWS_AS(fill_missing_direction(std::vector<double>{M}), DataError);
}

TEST_CASE("normalize examples") {
  const SeriesStats s{2.0, 1.0};
  CHECK(normalize(std::vector<double>{1, 2, 3}, s) == std::vector<double>{-1, 0, 1});
  const std::vector<double> x{0.3, -7.1, 12.25, 5.0};
  const auto stats = compute_stats(x);
  const auto back = denormalize(normalize(x, stats), stats);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-12);
  CHECK(compute_stats(std::vector<double>{4, 4, 4}).std == 1.0);
  const auto pop = compute_stats(std::vector<double>{1, 3});
  CHECK(pop.mean == 2.0);
  CHECK(pop.std == 1.0);
}

TEST_CASE("timestamps") {
  const auto t = parse_timestamp("2018-03-01T05:00:00");
  CHECK(format_timestamp(t) == "2018-03-01T05:00:00");
  CHECK(hour_of_day(t) == 5);
  CHECK(parse_timestamp("2018-03-01 05:00") == t);
  CHECK(parse_timestamp("2018-03-01T05") == t);
  CHECK_THROWS_AS(parse_timestamp("2018-03-01T05:30:00"), DataError);
  CHECK_THROWS_AS(parse_timestamp("2018-02-30T00:00:00"), DataError);
}

TEST_CASE("file ingestion fills gaps and derives components") {
  const auto dir = temp_dir("ingest");
  write_text(dir / "obs.csv",
             "timestamp,station,v,theta,tp,rh,slp\n"
             "2018-03-01T00:00:00,A,1,90,10,50,1000\n"
             "2018-03-01T00:00:00,B,2,180,11,51,1001\n"
             "2018-03-01T01:00:00,A,,,12,52,1002\n"
             "2018-03-01T01:00:00,B,4,180,13,53,1003\n"
             "2018-03-01T02:00:00,A,3,90,14,54,1004\n");
  write_text(dir / "nwp.csv",
             "timestamp,v,vx,vy,theta,tp,rh,slp\n"
             "2018-03-01T00:00:00,1,-1,0,90,10,50,1000\n"
             "2018-03-01T01:00:00,1,-1,0,90,10,50,1000\n"
             "2018-03-01T02:00:00,1,0,1,0,10,50,1000\n");
  const auto frame = load_frame(dir / "obs.csv", dir / "nwp.csv");
  REQUIRE(frame.length() == 3);
  REQUIRE(frame.station_count() == 2);
  const auto a = frame.station_index("A");
  const auto b = frame.station_index("B");
  CHECK(frame.obs(1, Variable::v, a) == 2.0);
  CHECK(frame.obs(1, Variable::theta, a) == doctest::Approx(90.0));
  CHECK(frame.obs(1, Variable::vx, a) == doctest::Approx(-2.0));
  CHECK(frame.obs(2, Variable::v, b) == 4.0);
  CHECK(frame.obs(2, Variable::slp, b) == 1003.0);
  CHECK(frame.nwp(2, Variable::theta) == 360.0);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t s = 0; s < 2; ++s) {
      const auto w = decompose_wind(frame.obs(t, Variable::v, s), frame.obs(t, Variable::theta, s));
      CHECK(std::abs(frame.obs(t, Variable::vx, s) - w.vx) < 1e-9);
      CHECK(std::abs(frame.obs(t, Variable::vy, s) - w.vy) < 1e-9);
    }

  write_observations(dir / "out_obs.csv", frame);
  write_nwp(dir / "out_nwp.csv", frame);
  const auto again = load_frame(dir / "out_obs.csv", dir / "out_nwp.csv");
  CHECK(again.obs(1, Variable::v, a) == 2.0);

  write_text(dir / "bad_nwp.csv",
             "timestamp,v,vx,vy,theta,tp,rh,slp\n"
             "2018-03-01T00:00:00,1,-1,0,90,10,,1000\n");
  CHECK_THROWS_AS(load_frame(dir / "obs.csv", dir / "bad_nwp.csv"), DataError);
  write_text(dir / "gap_nwp.csv",
             "timestamp,v,vx,vy,theta,tp,rh,slp\n"
             "2018-03-01T00:00:00,1,-1,0,90,10,50,1000\n"
             "2018-03-01T02:00:00,1,-1,0,90,10,50,1000\n");
  CHECK_THROWS_AS(load_frame(dir / "obs.csv", dir / "gap_nwp.csv"), DataError);
  write_text(dir / "neg_obs.csv",
             "timestamp,station,v,theta,tp,rh,slp\n"
             "2018-03-01T00:00:00,A,-1,90,10,50,1000\n");
  CHECK_THROWS_AS(load_frame(dir / "neg_obs.csv", dir / "nwp.csv"), DataError);
  CHECK_THROWS_AS(load_frame(dir / "missing.csv", dir / "nwp.csv"), IoError);
}

TEST_CASE("make_windows examples") {
  WindowSpec spec;
  CHECK(make_windows(days_frame(3), 0, spec).size() == 2);
  CHECK(make_windows(days_frame(1), 0, spec).empty());

  const auto frame = days_frame(5, 2);
  spec.history_covariates = {Variable::tp};
  spec.future_covariates = {Variable::slp, Variable::rh};
  const auto windows = make_windows(frame, 1, spec);
  REQUIRE(windows.size() == 4);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    if (i) CHECK(w.fct > windows[i - 1].fct);
    CHECK(frame.hour(w.fct + 1) == 0);
    CHECK(w.history.size() == 24 * 2);
    CHECK(w.future.size() == 24 * 3);
    CHECK(w.history[23 * 2] == frame.obs(w.fct, Variable::v, 1));
    CHECK(w.history[0] == frame.obs(w.fct - 23, Variable::v, 1));
    CHECK(w.history[1] == frame.obs(w.fct - 23, Variable::tp, 1));
    CHECK(w.target[0] == frame.obs(w.fct + 1, Variable::v, 1));
    CHECK(w.future[0] == frame.nwp(w.fct + 1, Variable::v));
    CHECK(w.future[2] == frame.nwp(w.fct + 1, Variable::rh));
  }

  spec.history_covariates = {Variable::v};
  CHECK_THROWS_AS(make_windows(frame, 0, spec), ArgumentError);
  spec.history_covariates.clear();
  spec.fct_hour = 6;
  const auto shifted = forecast_origins(frame, spec);
  for (auto t : shifted) CHECK(frame.hour(t) == 5);
}

TEST_CASE("plan_splits examples") {
  const auto rolling = plan_splits(18, SplitMode::rolling);
  REQUIRE(rolling.folds.size() == 12);
  CHECK(rolling.folds[0].train == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(rolling.folds[0].validation == 5);
  CHECK(rolling.folds[0].test == 6);

  const auto inc = plan_splits(18, SplitMode::incremental);
  REQUIRE(inc.folds.size() == 12);
  CHECK(inc.folds[11].train.size() == 16);
  CHECK(inc.folds[11].train.front() == 0);
  CHECK(inc.folds[11].train.back() == 15);
  CHECK(inc.folds[11].validation == 16);
  CHECK(inc.folds[11].test == 17);

  std::set<std::size_t> tests;
  for (const auto& f : inc.folds) tests.insert(f.test);
  CHECK(tests.size() == 12);
  CHECK(*tests.begin() == 6);
  CHECK(*tests.rbegin() == 17);

  CHECK_THROWS_AS(plan_splits(13, SplitMode::incremental), ArgumentError);
  CHECK_NOTHROW(plan_splits(14, SplitMode::incremental));
  CHECK_THROWS_AS(plan_splits(5, SplitMode::rolling, 4), ArgumentError);
  CHECK(parse_split_mode("rolling") == SplitMode::rolling);
  CHECK_THROWS_AS(parse_split_mode("weekly"), ArgumentError);
}

TEST_CASE("calendar intervals and window assignment") {
  const auto frame = make_frame(
      24 * 70, 1, [](std::size_t t, std::size_t) { return 2.0 + std::sin(0.1 * t); },
      [](std::size_t) { return 2.0; }, "2018-02-20T00:00:00");
  const auto months = month_intervals(frame);
  REQUIRE(months.size() == 2);
  CHECK(format_timestamp(frame.timeline()[months[0].begin]) == "2018-03-01T00:00:00");
  CHECK(months[0].size() == 31 * 24);
  CHECK(months[1].size() == 30 * 24);
  CHECK(months[1].end == frame.length());
  const auto trimmed = make_frame(
      24 * 69, 1, [](std::size_t, std::size_t) { return 1.0; }, [](std::size_t) { return 1.0; },
      "2018-02-20T00:00:00");
  CHECK(month_intervals(trimmed).size() == 1);

  const auto blocks = day_intervals(days_frame(10), 3);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[2].end == 9 * 24);

  const auto f10 = days_frame(10);
  const auto intervals = day_intervals(f10, 2);
  const auto plan = plan_splits(intervals.size(), SplitMode::incremental, 2);
  WindowSpec spec;
  const auto origins = forecast_origins(f10, spec);
  const auto w = assign_windows(origins, spec, intervals, plan.folds[1]);
  const HourRange train = train_span(intervals, plan.folds[1]);
  for (auto t : w.train) CHECK(window_within(t, spec, train));
  for (auto t : w.test) CHECK(window_within(t, spec, intervals[plan.folds[1].test]));
  // A 2-day interval holds exactly one full window.
  CHECK(w.validation.size() == 1);
  CHECK(w.test.size() == 1);
}

TEST_CASE("correlation diagnostics examples") {
  std::vector<double> sine(24 * 20), shifted(24 * 20);
  for (std::size_t t = 0; t < sine.size(); ++t) {
    sine[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0);
    shifted[t] = t >= 5 ? sine[t - 5] : 0.0;
  }
  const auto acf = autocorrelation(sine, 30);
  CHECK(acf[0].value == doctest::Approx(1.0));
  CHECK(acf[24].value > 0.999);

  std::vector<double> noise(500), lagged(500, 0.0);
  Rng rng(4);
  std::normal_distribution<double> n;
  for (auto& x : noise) x = n(rng);
  for (std::size_t t = 7; t < 500; ++t) lagged[t] = noise[t - 7];
  std::size_t best = 0;
  double best_value = -2.0;
  for (std::size_t lag = 0; lag <= 12; ++lag) {
    const double c = lagged_correlation(noise, lagged, lag).value;
    if (c > best_value) best_value = c, best = lag;
  }
  CHECK(best == 7);
  CHECK(best_value == doctest::Approx(1.0).epsilon(1e-9));

  const auto constant_series = pearson(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3});
  CHECK(constant_series.degenerate);
  CHECK(constant_series.value == 0.0);

  const auto frame = days_frame(4, 3);
  const auto curves = correlation_diagnostics(frame, Variable::v, 10, 1);
  std::size_t autos = 0, cross = 0, spatial = 0;
  for (const auto& c : curves) {
    CHECK(c.by_lag.size() == 11);
    autos += c.kind == "auto";
    cross += c.kind == "cross";
    spatial += c.kind == "spatial";
  }
  CHECK(autos == 1);
  CHECK(cross == 7);
  CHECK(spatial == 2);
  const auto dir = temp_dir("diag");
  write_diagnostics(dir / "d.csv", curves);
  std::ifstream in(dir / "d.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "kind,series,lag,correlation,degenerate");
}
