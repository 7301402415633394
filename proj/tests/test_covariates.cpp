// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "mhstn/covariates.hpp"
#include "mhstn/errors.hpp"
#include "mhstn/synth.hpp"
#include "support.hpp"

using namespace mhstn;

namespace {

// Importance vector over the seven canonical candidates (v, vx, vy, theta,
// tp, rh, slp) from a table column given in v, vx, vy, theta, rh, slp, tp
// row order.
ImportanceVector from_table(Variable target, Branch branch, std::array<double, 7> rows) {
  ImportanceVector iv;
  iv.target = target;
  iv.branch = branch;
  iv.candidates.assign(kAllVariables.begin(), kAllVariables.end());
  iv.values = {rows[0], rows[1], rows[2], rows[3], rows[6], rows[4], rows[5]};
  return iv;
}

Eigen::VectorXd noise(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = d(rng);
  return x;
}

// AR(1) target plus a leading covariate and noise columns.
Eigen::MatrixXd planted_series(Eigen::Index n, std::size_t noise_columns, Rng& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd m(n, 2 + static_cast<Eigen::Index>(noise_columns));
  double driver = 0.0, y = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    driver = 0.9 * driver + d(rng);
    y = 0.3 * y + 0.8 * driver + 0.2 * d(rng);
    m(t, 0) = y;
    m(t, 1) = driver;
    for (std::size_t j = 0; j < noise_columns; ++j) m(t, 2 + static_cast<Eigen::Index>(j)) = d(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("ridge_fit examples") {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
  const auto w = ridge_fit(I, e1, 1e-9);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(w[1]) < 1e-12);

  Rng rng(2);
  Eigen::MatrixXd X(200, 2);
  X.col(0) = noise(200, rng);
  X.col(1) = noise(200, rng);
  const Eigen::VectorXd y = 2.0 * X.col(0);
  const auto planted = ridge_fit(X, y, 1e-6);
  CHECK(planted[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(planted[1]) < 1e-6);
  CHECK(ridge_fit(X, y, 1e12).norm() < 1e-6);

  Eigen::MatrixXd singular(4, 2);
  singular << 1, 2, 2, 4, 3, 6, 4, 8;
  CHECK_THROWS_AS(ridge_fit(singular, Eigen::VectorXd::Ones(4), 0.0), NumericError);
  CHECK_NOTHROW(ridge_fit(singular, Eigen::VectorXd::Ones(4), 0.1));
  CHECK_THROWS_AS(ridge_fit(singular, Eigen::VectorXd::Ones(4), -1.0), ArgumentError);
}

TEST_CASE("historical importance: a copy of the target scores 1, noise scores near 0") {
  Rng rng(8);
  auto m = planted_series(2000, 3, rng);
  m.col(1) = m.col(0);
  const auto imp = historical_importance(m, 0, 4, 1.0);
  CHECK(imp[0] == doctest::Approx(1.0));
  CHECK(imp[1] == doctest::Approx(1.0));
  for (std::size_t j = 2; j < imp.size(); ++j) CHECK(imp[j] < 0.2);
}

TEST_CASE("historical importance is permutation-equivariant") {
  Rng rng(9);
  const auto m = planted_series(800, 3, rng);
  const auto base = historical_importance(m, 0, 12, 1.0);
  std::vector<Eigen::Index> perm{3, 0, 4, 1, 2};
  Eigen::MatrixXd p(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) p.col(j) = m.col(perm[static_cast<std::size_t>(j)]);
  const auto permuted = historical_importance(p, 1, 12, 1.0);
  for (std::size_t j = 0; j < perm.size(); ++j)
    CHECK(permuted[j] == doctest::Approx(base[static_cast<std::size_t>(perm[j])]).epsilon(1e-10));
}

TEST_CASE("importance ranking is invariant to rescaling the target") {
  Rng rng(10);
  auto m = planted_series(800, 3, rng);
  const auto base = historical_importance(m, 0, 8, 1.0);
  m.col(0) *= 37.5;
  const auto scaled = historical_importance(m, 0, 8, 1.0);
  std::vector<std::size_t> a(base.size()), b(base.size());
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  std::sort(a.begin(), a.end(), [&](auto i, auto j) { return base[i] > base[j]; });
  std::sort(b.begin(), b.end(), [&](auto i, auto j) { return scaled[i] > scaled[j]; });
  CHECK(a == b);
}

TEST_CASE("duplicating the informative covariate keeps noise below it") {
  Rng rng(12);
  const auto m = planted_series(1500, 2, rng);
  Eigen::MatrixXd dup(m.rows(), m.cols() + 1);
  dup << m, m.col(1);
  const auto imp = historical_importance(dup, 0, 12, 1.0);
  CHECK(imp[1] > imp[2]);
  CHECK(imp[1] > imp[3]);
  CHECK(imp[4] > imp[2]);
  CHECK(imp[4] > imp[3]);
}

TEST_CASE("future importance examples") {
  Rng rng(13);
  const Eigen::Index n = 1000;
  const Eigen::VectorXd y = noise(n, rng);
  Eigen::MatrixXd cand(n, 4);
  cand.col(0) = y + 0.05 * noise(n, rng);
  for (Eigen::Index j = 1; j < 4; ++j) cand.col(j) = noise(n, rng);
  const auto imp = future_importance(y, cand, 1.0);
  CHECK(imp[0] == 1.0);
  for (std::size_t j = 1; j < 4; ++j) CHECK(imp[j] < 0.2);

  cand.col(2) = y;
  const auto exact = future_importance(y, cand, 1e-9);
  CHECK(exact[2] == doctest::Approx(1.0));

  std::size_t degenerate = 0;
  Eigen::MatrixXd flat(n, 2);
  flat.col(0) = y;
  flat.col(1) = y;
  const auto tie = future_importance(y, flat, 1.0, &degenerate);
  CHECK(degenerate == 1);
  CHECK(tie[0] == 0.5);
  CHECK(tie[1] == 0.5);
}

TEST_CASE("select on a reference importance table") {
  const auto hv = from_table(Variable::v, Branch::historical, {0.9440, 0.3493, 0.4479, 0.1325, 0.0038, 0.3713, 0.3101});
  CHECK(select_covariates({hv}) ==
        std::vector<Variable>{Variable::v, Variable::vx, Variable::vy, Variable::tp, Variable::slp});
  const auto hvx = from_table(Variable::vx, Branch::historical, {0.2476, 0.9964, 0.2351, 0.0721, 0.0050, 0.0503, 0.1632});
  CHECK(select_covariates({hvx}) == std::vector<Variable>{Variable::v, Variable::vx, Variable::vy});
  const auto hvy = from_table(Variable::vy, Branch::historical, {0.4946, 0.6254, 0.7443, 0.0942, 0.0131, 0.0547, 0.1837});
  CHECK(select_covariates({hvy}) == std::vector<Variable>{Variable::v, Variable::vx, Variable::vy});

  const auto fvx = from_table(Variable::vx, Branch::future, {0.1192, 1.0000, 0.1848, 0.0624, 0.0004, 0.0128, 0.0093});
  CHECK(select_covariates({fvx}) == std::vector<Variable>{Variable::vx});
  const auto fvy = from_table(Variable::vy, Branch::future, {0.0642, 0.0765, 1.0000, 0.0618, 0.0005, 0.0183, 0.0053});
  CHECK(select_covariates({fvy}) == std::vector<Variable>{Variable::vy});
  // The future-v column lists vx at 0.2066; the strict threshold keeps it.
  const auto fv = from_table(Variable::v, Branch::future, {1.0000, 0.2066, 0.1092, 0.0203, 0.0001, 0.0296, 0.0444});
  CHECK(select_covariates({fv}) == std::vector<Variable>{Variable::v, Variable::vx});

  auto low = hv;
  std::fill(low.values.begin(), low.values.end(), 0.1);
  CHECK(select_covariates({low}) == std::vector<Variable>{Variable::v});
  low.values[0] = 0.0;
  CHECK(select_covariates({low}) == std::vector<Variable>{Variable::v});
  auto edge = low;
  edge.values[4] = 0.2;
  CHECK(select_covariates({edge}) == std::vector<Variable>{Variable::v});
}

TEST_CASE("select averages over stations") {
  auto a = from_table(Variable::v, Branch::historical, {1, 0.5, 0, 0, 0, 0, 0});
  auto b = from_table(Variable::v, Branch::historical, {1, 0.0, 0.3, 0, 0, 0, 0});
  const auto avg = average_importance({a, b});
  CHECK(avg[Variable::vx] == 0.25);
  CHECK(avg[Variable::vy] == 0.15);
  CHECK(select_covariates({a, b}) == std::vector<Variable>{Variable::v, Variable::vx});
}

TEST_CASE("frame-level selection and report round trip") {
  SynthSpec spec;
  spec.days = 20;
  const auto frame = synthesize(spec);
  const HourRange range{0, 15 * 24};
  std::vector<CovariateSelection> all;
  for (auto target : kSpeedTargets) {
    const auto sel = run_covariate_selection(frame, target, range, 24, 1.0, 0.2);
    CHECK(std::find(sel.historical_selected.begin(), sel.historical_selected.end(), target) !=
          sel.historical_selected.end());
    CHECK(std::find(sel.future_selected.begin(), sel.future_selected.end(), target) != sel.future_selected.end());
    CHECK(sel.historical.values.size() == 7);
    for (double x : sel.historical.values) CHECK((x >= 0.0 && x <= 1.0));
    all.push_back(sel);
  }
  const auto path = std::filesystem::temp_directory_path() / "mhstn_test_covariates.txt";
  write_covariate_report(path, all, 0.2);
  const auto back = read_covariate_report(path);
  REQUIRE(back.size() == 3);
  for (const auto& sel : all) {
    CHECK(back.at(sel.target).historical == sel.historical_selected);
    CHECK(back.at(sel.target).future == sel.future_selected);
  }
}
