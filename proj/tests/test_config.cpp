// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mhstn/config.hpp"
#include "mhstn/errors.hpp"
#include "mhstn/evaluation.hpp"
#include "mhstn/synth.hpp"

using namespace mhstn;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config precedence: cli over file over default") {
  const auto dir = scratch("mhstn_config");
  {
    std::ofstream out(dir / "run.cfg");
    out << "# comment\n\nlr_init = 0.01\nbatch=16\nmodels = nwp, persistence\n";
  }
  Config c;
  CHECK(c.real("lr_init") == 1e-3);
  CHECK(c.source("lr_init") == "default");
  c.load_file(dir / "run.cfg");
  CHECK(c.real("lr_init") == 0.01);
  CHECK(c.count("batch") == 16);
  CHECK(c.source("batch") == "file");
  CHECK(c.list("models") == std::vector<std::string>{"nwp", "persistence"});
  c.set("batch", "8");
  CHECK(c.count("batch") == 8);
  CHECK(c.source("batch") == "cli");
  CHECK(c.source("max_epochs") == "default");
  CHECK(c.integer("fold") == -1);
  CHECK_FALSE(c.flag("use_covariates"));
}

TEST_CASE("config errors") {
  const auto dir = scratch("mhstn_config_bad");
  {
    std::ofstream out(dir / "bad.cfg");
    out << "lr_init = 0.01\nlearning_rate = 3\n";
  }
  Config c;
  CHECK_THROWS_AS(c.load_file(dir / "bad.cfg"), ArgumentError);
  CHECK_THROWS_AS(c.load_file(dir / "missing.cfg"), IoError);
  CHECK_THROWS_AS(c.set("nope", "1"), ArgumentError);
  c.set("batch", "-3");
  CHECK_THROWS_AS(c.count("batch"), ArgumentError);
  c.set("lr_init", "fast");
  CHECK_THROWS_AS(c.real("lr_init"), ArgumentError);
  c.set("clip_speed", "maybe");
  CHECK_THROWS_AS(c.flag("clip_speed"), ArgumentError);
}

TEST_CASE("every train config field has a config key") {
  Config c;
  for (const char* key : {"lr_init", "lr_factor", "lr_patience", "lr_min", "batch", "early_stop_patience",
                          "max_epochs", "seed", "horizon", "history", "covariate_threshold"}) {
    CHECK_NOTHROW(c.str(key));
  }
}

TEST_CASE("synth validation") {
  SynthSpec s;
  CHECK_NOTHROW(s.validate());
  s.ar_coefficient = 1.0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s = SynthSpec{};
  s.days = 2;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s = SynthSpec{};
  s.stations = 0;
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  s = SynthSpec{};
  s.nwp_noise = -1.0;
  CHECK_THROWS_AS(synthesize(s), ArgumentError);
}

TEST_CASE("synth files are reproducible") {
  SynthSpec s;
  s.days = 4;
  s.seed = 11;
  const auto a = scratch("mhstn_synth_a");
  const auto b = scratch("mhstn_synth_b");
  write_synth(a, s);
  write_synth(b, s);
  CHECK(slurp(a / "observations.csv") == slurp(b / "observations.csv"));
  CHECK(slurp(a / "nwp.csv") == slurp(b / "nwp.csv"));
  s.seed = 12;
  write_synth(b, s);
  CHECK(slurp(a / "observations.csv") != slurp(b / "observations.csv"));

  const auto frame = load_frame(a / "observations.csv", a / "nwp.csv");
  CHECK(frame.length() == 96);
  CHECK(frame.station_count() == 3);
}

TEST_CASE("synth nwp error equals the planted bias") {
  for (double bias : {0.0, 0.8, -0.5}) {
    SynthSpec s;
    s.days = 6;
    s.noise_scale = 0.0;
    s.nwp_noise = 0.0;
    s.nwp_bias = bias;
    const auto frame = synthesize(s);
    for (std::size_t st = 0; st < frame.station_count(); ++st) {
      std::vector<double> truth, pred;
      for (std::size_t t = 0; t < frame.length(); ++t) {
        truth.push_back(frame.obs(t, Variable::v, st));
        pred.push_back(frame.nwp(t, Variable::v));
      }
      CHECK(rmse(truth, pred) == doctest::Approx(std::abs(bias)).epsilon(1e-12));
    }
  }
}
