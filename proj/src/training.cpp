// SPDX-License-Identifier: Apache-2.0
#include "mhstn/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mhstn/adam.hpp"
#include "mhstn/errors.hpp"

namespace mhstn {

void TrainConfig::validate() const {
  if (!(lr_init > 0.0) || !(lr_min > 0.0) || lr_min > lr_init) {
    throw ArgumentError("train config: need 0 < lr_min <= lr_init");
  }
  if (!(lr_factor > 0.0 && lr_factor < 1.0)) throw ArgumentError("train config: lr_factor must be in (0, 1)");
  if (lr_patience == 0 || early_stop_patience == 0 || max_epochs == 0 || batch == 0) {
    throw ArgumentError("train config: patience, epoch and batch values must be positive");
  }
  if (horizon == 0 || history == 0) throw ArgumentError("train config: K and W must be positive");
}

PlateauMonitor::PlateauMonitor(const TrainConfig& config)
    : lr_(config.lr_init),
      factor_(config.lr_factor),
      lr_min_(config.lr_min),
      lr_patience_(config.lr_patience),
      stop_patience_(config.early_stop_patience),
      best_(std::numeric_limits<double>::infinity()) {}

bool PlateauMonitor::update(double validation_loss) {
  if (validation_loss < best_) {
    best_ = validation_loss;
    stale_lr_ = 0;
    stale_stop_ = 0;
    return true;
  }
  ++stale_stop_;
  if (++stale_lr_ >= lr_patience_) {
    if (lr_ > lr_min_) lr_ = std::max(lr_ * factor_, lr_min_);
    stale_lr_ = 0;
  }
  return false;
}

Tensor gather_rows(const Tensor& t, std::span<const std::size_t> index) {
  if (t.rank() == 0) throw DimensionError("gather_rows: scalar tensor");
  const std::size_t rows = t.dim(0);
  const std::size_t width = rows ? t.size() / rows : 0;
  Shape shape = t.shape();
  shape[0] = index.size();
  Tensor out(shape);
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= rows) throw ArgumentError("gather_rows: index out of range");
    std::copy_n(t.values().data() + index[r] * width, width, out.values().data() + r * width);
  }
  return out;
}

StageRecord train_stage(const StageProblem& problem, const TrainConfig& config, Rng& rng) {
  config.validate();
  if (problem.train_size == 0) throw ArgumentError("train_stage: empty training set");
  if (problem.validation_size == 0) throw ArgumentError("train_stage: empty validation set");
  if (problem.params.empty()) throw ArgumentError("train_stage: no parameters");

  Adam adam(problem.params, config.lr_init);
  PlateauMonitor monitor(config);
  StageRecord record;
  std::vector<std::vector<double>> best_values;
  auto snapshot = [&] {
    best_values.clear();
    for (const auto& p : problem.params)
      best_values.emplace_back(p->value.values().begin(), p->value.values().end());
  };

  std::vector<std::size_t> order(problem.train_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    adam.set_learning_rate(monitor.learning_rate());
    record.learning_rate.push_back(monitor.learning_rate());
    std::shuffle(order.begin(), order.end(), rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t count = std::min(config.batch, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, count);
      adam.zero_grad();
      Var loss = problem.batch_loss(idx);
      weighted += loss->value.item() * static_cast<double>(count);
      backward(loss);
      adam.step();
    }
    record.train_loss.push_back(weighted / static_cast<double>(order.size()));

    double val = 0.0;
    {
      NoGradGuard no_grad;
      val = problem.validation_loss();
    }
    if (!std::isfinite(val)) throw NumericError("train_stage: validation loss is not finite");
    record.validation_loss.push_back(val);
    record.epochs = epoch + 1;
    if (monitor.update(val)) {
      record.best_epoch = epoch;
      record.best_validation = val;
      snapshot();
    }
    if (monitor.should_stop()) {
      record.stopped_early = true;
      break;
    }
  }
  for (std::size_t k = 0; k < problem.params.size(); ++k) {
    auto values = problem.params[k]->value.values();
    std::copy(best_values[k].begin(), best_values[k].end(), values.begin());
  }
  return record;
}

}  // namespace mhstn
