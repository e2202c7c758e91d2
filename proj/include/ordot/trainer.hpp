#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ordot/loss.hpp"
#include "ordot/metrics.hpp"
#include "ordot/mlp.hpp"

namespace ordot {

struct TrainConfig {
  LossSpec loss;
  int epochs = 50;
  int batch_size = 128;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  // Halve the learning rate after this many epochs without a better
  // validation QWK; 0 disables the schedule.
  int plateau_patience = 10;
  double plateau_factor = 0.5;
  std::uint64_t seed = 0;
  std::vector<BinarySplit> splits;  // for TNR@TPR; empty skips it
  double tpr_target = 0.95;

  void validate() const;
};

struct LabeledSet {
  Eigen::MatrixXd features;
  std::vector<int> labels;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double learning_rate = 0.0;
  EvalReport validation;
};

struct TrainResult {
  MlpModel model;
  std::vector<EpochRecord> history;
};

// Minibatch training on `train` (noisy labels in the experiments), scored
// on `validation` after every epoch. Deterministic given cfg.seed.
TrainResult train(MlpModel model, const LabeledSet& train, const LabeledSet& validation, const TrainConfig& cfg);

// Default binarizations 0 | 1..N-1, 0-1 | 2..N-1, ... (three for five classes).
std::vector<BinarySplit> default_splits(int n_classes);

}  // namespace ordot
