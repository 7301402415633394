// SPDX-License-Identifier: Apache-2.0
#include "mhstn/covariates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "mhstn/errors.hpp"

namespace mhstn {

namespace {

Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mean = m.col(c).mean();
    const double sd = std::sqrt((m.col(c).array() - mean).square().mean());
    out.col(c) = (m.col(c).array() - mean) / (sd > 1e-12 ? sd : 1.0);
  }
  return out;
}

// |w| scaled to [0, 1]; weights equal up to rounding give a flat 0.5.
std::vector<double> min_max_magnitudes(const Eigen::VectorXd& w, bool& degenerate) {
  const Eigen::VectorXd a = w.cwiseAbs();
  const double lo = a.minCoeff();
  const double hi = a.maxCoeff();
  degenerate = !(hi - lo > 1e-12 * hi);
  std::vector<double> out(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out[static_cast<std::size_t>(i)] = degenerate ? 0.5 : (a(i) - lo) / (hi - lo);
  return out;
}

Eigen::MatrixXd candidate_matrix(const WeatherFrame& frame, std::size_t station, HourRange range,
                                 bool from_nwp) {
  if (range.end > frame.length() || range.size() == 0) throw ArgumentError("importance: bad range");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(range.size()), static_cast<Eigen::Index>(kVariableCount));
  for (std::size_t t = range.begin; t < range.end; ++t) {
    for (auto var : kAllVariables) {
      m(static_cast<Eigen::Index>(t - range.begin), static_cast<Eigen::Index>(index_of(var))) =
          from_nwp ? frame.nwp(t, var) : frame.obs(t, var, station);
    }
  }
  return m;
}

std::vector<Variable> all_candidates() { return {kAllVariables.begin(), kAllVariables.end()}; }

}  // namespace

Eigen::VectorXd ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
  if (X.rows() != y.size()) throw DimensionError("ridge_fit: X rows and y length differ");
  if (lambda < 0.0) throw ArgumentError("ridge_fit: lambda must be non-negative");
  const Eigen::Index p = X.cols();
  Eigen::MatrixXd gram = X.transpose() * X;
  gram.diagonal().array() += lambda;
  if (lambda == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (lu.rank() < p) throw NumericError("ridge_fit: singular system; use lambda > 0");
    return lu.solve(X.transpose() * y);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericError("ridge_fit: factorization failed");
  return llt.solve(X.transpose() * y);
}

std::string_view branch_name(Branch b) noexcept {
  return b == Branch::historical ? "historical" : "future";
}

double ImportanceVector::operator[](Variable v) const {
  const auto it = std::find(candidates.begin(), candidates.end(), v);
  if (it == candidates.end()) throw ArgumentError("variable is not a candidate");
  return values[static_cast<std::size_t>(it - candidates.begin())];
}

std::vector<double> historical_importance(const Eigen::MatrixXd& series, std::size_t self,
                                          std::size_t horizons, double lambda,
                                          std::size_t* degenerate) {
  const auto rows = static_cast<std::size_t>(series.rows());
  const auto p = static_cast<std::size_t>(series.cols());
  if (self >= p) throw ArgumentError("historical_importance: self column out of range");
  if (horizons == 0 || rows <= horizons + 1) {
    throw ArgumentError("historical_importance: series too short for the horizon count");
  }
  const Eigen::MatrixXd z = zscore_columns(series);
  std::vector<double> acc(p, 0.0);
  std::size_t flat = 0;
  for (std::size_t k = 1; k <= horizons; ++k) {
    const auto n = static_cast<Eigen::Index>(rows - k);
    const Eigen::MatrixXd X = z.topRows(n);
    const Eigen::VectorXd y = z.col(static_cast<Eigen::Index>(self)).tail(n);
    bool deg = false;
    const auto scaled = min_max_magnitudes(ridge_fit(X, y, lambda), deg);
    flat += deg ? 1 : 0;
    for (std::size_t j = 0; j < p; ++j) acc[j] += scaled[j];
  }
  for (auto& a : acc) a /= static_cast<double>(horizons);
  if (degenerate) *degenerate = flat;
  return acc;
}

std::vector<double> future_importance(const Eigen::VectorXd& y, const Eigen::MatrixXd& candidates,
                                      double lambda, std::size_t* degenerate) {
  if (candidates.rows() != y.size()) throw DimensionError("future_importance: length mismatch");
  if (y.size() < 2) throw ArgumentError("future_importance: need at least two rows");
  Eigen::MatrixXd joined(candidates.rows(), candidates.cols() + 1);
  joined << candidates, y;
  const Eigen::MatrixXd z = zscore_columns(joined);
  bool deg = false;
  auto out = min_max_magnitudes(
      ridge_fit(z.leftCols(candidates.cols()), z.col(candidates.cols()), lambda), deg);
  if (degenerate) *degenerate = deg ? 1 : 0;
  return out;
}

ImportanceVector importance_historical(const WeatherFrame& frame, std::size_t station,
                                       Variable target, HourRange range, std::size_t horizons,
                                       double lambda) {
  ImportanceVector iv;
  iv.branch = Branch::historical;
  iv.target = target;
  iv.candidates = all_candidates();
  iv.values = historical_importance(candidate_matrix(frame, station, range, false),
                                    index_of(target), horizons, lambda, &iv.degenerate_fits);
  return iv;
}

ImportanceVector importance_future(const WeatherFrame& frame, std::size_t station, Variable target,
                                   HourRange range, double lambda) {
  ImportanceVector iv;
  iv.branch = Branch::future;
  iv.target = target;
  iv.candidates = all_candidates();
  const Eigen::MatrixXd obs = candidate_matrix(frame, station, range, false);
  iv.values = future_importance(obs.col(static_cast<Eigen::Index>(index_of(target))),
                                candidate_matrix(frame, station, range, true), lambda,
                                &iv.degenerate_fits);
  return iv;
}

ImportanceVector average_importance(const std::vector<ImportanceVector>& per_station) {
  if (per_station.empty()) throw ArgumentError("average_importance: no importance vectors");
  ImportanceVector avg = per_station.front();
  avg.degenerate_fits = 0;
  std::fill(avg.values.begin(), avg.values.end(), 0.0);
  for (const auto& iv : per_station) {
    if (iv.candidates != avg.candidates || iv.branch != avg.branch || iv.target != avg.target) {
      throw ArgumentError("average_importance: vectors describe different candidates");
    }
    for (std::size_t j = 0; j < avg.values.size(); ++j) avg.values[j] += iv.values[j];
    avg.degenerate_fits += iv.degenerate_fits;
  }
  for (auto& v : avg.values) v /= static_cast<double>(per_station.size());
  return avg;
}

std::vector<Variable> select_covariates(const std::vector<ImportanceVector>& per_station,
                                        double threshold) {
  const ImportanceVector avg = average_importance(per_station);
  std::vector<Variable> out;
  for (std::size_t j = 0; j < avg.candidates.size(); ++j) {
    if (avg.candidates[j] == avg.target || avg.values[j] > threshold)
      out.push_back(avg.candidates[j]);
  }
  return out;
}

CovariateSelection run_covariate_selection(const WeatherFrame& frame, Variable target,
                                           HourRange range, std::size_t horizons, double lambda,
                                           double threshold) {
  std::vector<ImportanceVector> hist, fut;
  for (std::size_t s = 0; s < frame.station_count(); ++s) {
    hist.push_back(importance_historical(frame, s, target, range, horizons, lambda));
    fut.push_back(importance_future(frame, s, target, range, lambda));
  }
  CovariateSelection sel;
  sel.target = target;
  sel.historical = average_importance(hist);
  sel.future = average_importance(fut);
  sel.historical_selected = select_covariates(hist, threshold);
  sel.future_selected = select_covariates(fut, threshold);
  return sel;
}

void write_covariate_report(const std::filesystem::path& path,
                            const std::vector<CovariateSelection>& selections, double threshold) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# covariate importance (station average)\n";
  out << "threshold = " << threshold << "\n";
  char buf[32];
  for (const auto& sel : selections) {
    for (const auto* iv : {&sel.historical, &sel.future}) {
      out << "\n[" << variable_name(sel.target) << '.' << branch_name(iv->branch) << "]\n";
      for (std::size_t j = 0; j < iv->candidates.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.4f", iv->values[j]);
        out << variable_name(iv->candidates[j]) << " = " << buf << '\n';
      }
      out << "degenerate_fits = " << iv->degenerate_fits << '\n';
      const auto& chosen =
          iv->branch == Branch::historical ? sel.historical_selected : sel.future_selected;
      out << "selected = " << join_variables(chosen) << '\n';
    }
  }
}

std::map<Variable, SelectedSets> read_covariate_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<Variable, SelectedSets> out;
  std::string line;
  std::string section;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      section = line.substr(1, line.find(']') - 1);
      continue;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos || line.substr(0, eq) != "selected" || section.empty()) continue;
    const auto dot = section.find('.');
    if (dot == std::string::npos) throw DataError("malformed report section [" + section + "]");
    const Variable target = parse_variable(section.substr(0, dot));
    const auto branch = section.substr(dot + 1);
    auto vars = parse_variable_list(line.substr(eq + 3));
    if (branch == "historical") out[target].historical = std::move(vars);
    else if (branch == "future") out[target].future = std::move(vars);
    else throw DataError("unknown report branch '" + branch + "'");
  }
  return out;
}

}  // namespace mhstn
