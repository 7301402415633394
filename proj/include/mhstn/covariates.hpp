// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string_view>
#include <vector>

#include "mhstn/frame.hpp"
#include "mhstn/splits.hpp"
#include "mhstn/variables.hpp"

namespace mhstn {

// No-intercept ridge: w = (X'X + lambda I)^-1 X'y.
Eigen::VectorXd ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

enum class Branch { historical, future };
std::string_view branch_name(Branch b) noexcept;

struct ImportanceVector {
  Branch branch = Branch::historical;
  Variable target = Variable::v;
  std::vector<Variable> candidates;  // includes the target itself
  std::vector<double> values;        // in [0, 1], aligned with candidates
  std::size_t degenerate_fits = 0;   // fits whose weights were all equal

  double operator[](Variable v) const;
};

// Core routines on plain matrices. Columns are candidate series; all inputs
// are z-normalized internally before fitting.
//
// Historical: for each horizon k = 1..K, regress series[t+k, self] on the
// row series[t, :], take |w|, min-max scale to [0, 1] and average over k.
std::vector<double> historical_importance(const Eigen::MatrixXd& series, std::size_t self,
                                          std::size_t horizons, double lambda,
                                          std::size_t* degenerate = nullptr);
// Future: one point-to-point regression of y[t] on candidates[t, :].
std::vector<double> future_importance(const Eigen::VectorXd& y, const Eigen::MatrixXd& candidates,
                                      double lambda, std::size_t* degenerate = nullptr);

// Frame-level wrappers over the rows in `range`; candidates are all seven
// variables in canonical order.
ImportanceVector importance_historical(const WeatherFrame& frame, std::size_t station,
                                       Variable target, HourRange range, std::size_t horizons,
                                       double lambda);
ImportanceVector importance_future(const WeatherFrame& frame, std::size_t station, Variable target,
                                   HourRange range, double lambda);

ImportanceVector average_importance(const std::vector<ImportanceVector>& per_station);

// Station-averaged importances strictly above the threshold; the target is
// always kept. Returned in candidate order.
std::vector<Variable> select_covariates(const std::vector<ImportanceVector>& per_station,
                                        double threshold = 0.2);

struct CovariateSelection {
  Variable target = Variable::v;
  ImportanceVector historical;  // station average
  ImportanceVector future;
  std::vector<Variable> historical_selected;  // includes target
  std::vector<Variable> future_selected;
};

CovariateSelection run_covariate_selection(const WeatherFrame& frame, Variable target,
                                           HourRange range, std::size_t horizons, double lambda,
                                           double threshold);

void write_covariate_report(const std::filesystem::path& path,
                            const std::vector<CovariateSelection>& selections, double threshold);
// Selected sets keyed by target, as written by write_covariate_report.
struct SelectedSets {
  std::vector<Variable> historical;
  std::vector<Variable> future;
};
std::map<Variable, SelectedSets> read_covariate_report(const std::filesystem::path& path);

}  // namespace mhstn
