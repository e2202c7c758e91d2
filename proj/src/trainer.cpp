#include "ordot/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ordot/error.hpp"

namespace ordot {

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
  if (plateau_patience < 0) throw ConfigError("plateau_patience must be >= 0");
  if (!(plateau_factor > 0.0 && plateau_factor <= 1.0)) throw ConfigError("plateau_factor must be in (0, 1]");
  loss.validate();
}

std::vector<BinarySplit> default_splits(int n_classes) {
  std::vector<BinarySplit> out;
  for (int k = 0; k <= std::max(0, n_classes - 3); ++k) {
    BinarySplit split;
    for (int c = 0; c <= k; ++c) split.negative.push_back(c);
    for (int c = k + 1; c < n_classes; ++c) split.positive.push_back(c);
    const auto range = [](int lo, int hi) {
      return lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
    };
    split.name = range(0, k) + " vs " + range(k + 1, n_classes - 1);
    out.push_back(std::move(split));
  }
  return out;
}

TrainResult train(MlpModel model, const LabeledSet& train_set, const LabeledSet& validation,
                  const TrainConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(train_set.labels.size());
  if (train_set.features.rows() != n) throw ShapeError("training features and labels differ in count");
  if (validation.features.rows() != static_cast<Eigen::Index>(validation.labels.size())) {
    throw ShapeError("validation features and labels differ in count");
  }
  if (train_set.features.cols() != model.input_dim()) throw ShapeError("feature width does not match the model");

  const LossFunction loss(cfg.loss, model.n_classes());
  Optimizer optimizer(model, cfg.optimizer, cfg.weight_decay);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  TrainResult result{std::move(model), {}};
  MlpModel& net = result.model;
  double lr = cfg.learning_rate;
  double best_qwk = -std::numeric_limits<double>::infinity();
  int stale = 0;

  Eigen::MatrixXd batch_x;
  std::vector<int> batch_y;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
      const Eigen::Index count = std::min<Eigen::Index>(cfg.batch_size, n - start);
      batch_x.resize(count, train_set.features.cols());
      batch_y.resize(static_cast<std::size_t>(count));
      for (Eigen::Index r = 0; r < count; ++r) {
        const Eigen::Index src = order[static_cast<std::size_t>(start + r)];
        batch_x.row(r) = train_set.features.row(src);
        batch_y[static_cast<std::size_t>(r)] = train_set.labels[static_cast<std::size_t>(src)];
      }
      const Eigen::MatrixXd logits = net.logits(batch_x);
      if (!logits.allFinite()) {
        throw TrainingDiverged(epoch, "logits became non-finite in epoch " + std::to_string(epoch));
      }
      const BatchLoss batch = loss.evaluate_batch(logits, batch_y);
      if (!std::isfinite(batch.mean_value) || !batch.grad_logits.allFinite()) {
        throw TrainingDiverged(epoch, "loss became non-finite in epoch " + std::to_string(epoch));
      }
      loss_sum += batch.mean_value * static_cast<double>(count);
      optimizer.step(net, net.backward(batch_x, batch.grad_logits), lr);
    }
    if (!net.all_finite()) {
      throw TrainingDiverged(epoch, "parameters became non-finite in epoch " + std::to_string(epoch));
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = n > 0 ? loss_sum / static_cast<double>(n) : 0.0;
    record.learning_rate = lr;
    if (validation.features.rows() > 0) {
      record.validation = evaluate(net.probabilities(validation.features), validation.labels, cfg.splits, cfg.tpr_target);
    }
    result.history.push_back(record);

    if (cfg.plateau_patience > 0) {
      if (record.validation.qwk > best_qwk) {
        best_qwk = record.validation.qwk;
        stale = 0;
      } else if (++stale >= cfg.plateau_patience) {
        lr *= cfg.plateau_factor;
        stale = 0;
      }
    }
  }
  return result;
}

}  // namespace ordot
