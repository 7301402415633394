// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mhstn/autodiff.hpp"
#include "mhstn/random.hpp"

namespace mhstn {

struct TrainConfig {
  double lr_init = 1e-3;
  double lr_factor = 0.5;
  std::size_t lr_patience = 3;
  double lr_min = 1e-4;
  std::size_t batch = 32;
  std::size_t early_stop_patience = 30;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 0;
  std::size_t horizon = 24;  // K
  std::size_t history = 24;  // W

  void validate() const;
};

// Tracks "no improvement" epochs against the best validation loss seen so
// far (strict improvement, zero tolerance).
class PlateauMonitor {
 public:
  explicit PlateauMonitor(const TrainConfig& config);

  // Feeds one epoch's validation loss. Returns true when it is a new best.
  bool update(double validation_loss);

  double learning_rate() const noexcept { return lr_; }
  bool should_stop() const noexcept { return stale_stop_ >= stop_patience_; }
  std::size_t stale_epochs() const noexcept { return stale_stop_; }
  double best() const noexcept { return best_; }

 private:
  double lr_;
  double factor_;
  double lr_min_;
  std::size_t lr_patience_;
  std::size_t stop_patience_;
  double best_;
  std::size_t stale_lr_ = 0;
  std::size_t stale_stop_ = 0;
};

// One trainable stage: a parameter set, a recorded mini-batch loss and an
// unrecorded validation loss.
struct StageProblem {
  std::vector<Var> params;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
  std::function<Var(std::span<const std::size_t>)> batch_loss;
  std::function<double()> validation_loss;
};

struct StageRecord {
  std::size_t epochs = 0;
  std::size_t best_epoch = 0;
  double best_validation = 0.0;
  bool stopped_early = false;
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  std::vector<double> learning_rate;  // rate used during each epoch
};

// Mini-batch Adam with a reduce-on-plateau schedule and early stopping on
// the validation loss. On return the parameters hold the best-validation
// epoch's values.
StageRecord train_stage(const StageProblem& problem, const TrainConfig& config, Rng& rng);

// Rows `index` of a tensor along its first axis.
Tensor gather_rows(const Tensor& t, std::span<const std::size_t> index);

}  // namespace mhstn
