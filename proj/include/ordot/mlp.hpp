#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ordot {

enum class Activation { kRelu, kTanh };

struct MlpGradients {
  Eigen::MatrixXd w1, w2;
  Eigen::VectorXd b1, b2;
};

// input -> [hidden, activation] -> logits. With hidden_dim == 0 the hidden
// layer is dropped and the model is multinomial logistic regression.
class MlpModel {
 public:
  MlpModel(int input_dim, int hidden_dim, int n_classes, Activation activation, std::uint64_t seed);

  int input_dim() const noexcept { return input_dim_; }
  int hidden_dim() const noexcept { return hidden_dim_; }
  int n_classes() const noexcept { return n_classes_; }
  Activation activation() const noexcept { return activation_; }

  // Rows of x are samples.
  Eigen::MatrixXd logits(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd probabilities(const Eigen::MatrixXd& x) const;

  // Parameter gradients given dL/dlogits for the batch x.
  MlpGradients backward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& grad_logits) const;

  bool all_finite() const;

  Eigen::MatrixXd w1, w2;  // (hidden x input), (classes x hidden or input)
  Eigen::VectorXd b1, b2;

  friend bool operator==(const MlpModel& a, const MlpModel& b) {
    return a.w1 == b.w1 && a.w2 == b.w2 && a.b1 == b.b1 && a.b2 == b.b2;
  }

 private:
  Eigen::MatrixXd hidden(const Eigen::MatrixXd& x, Eigen::MatrixXd* pre = nullptr) const;

  int input_dim_;
  int hidden_dim_;
  int n_classes_;
  Activation activation_;
};

enum class OptimizerKind { kAdam, kSgd };

// Adam (or plain SGD) with L2 weight decay on the weight matrices.
class Optimizer {
 public:
  Optimizer(const MlpModel& model, OptimizerKind kind, double weight_decay);

  void step(MlpModel& model, MlpGradients grads, double learning_rate);

 private:
  OptimizerKind kind_;
  double weight_decay_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long steps_ = 0;
  MlpGradients m_, v_;
};

}  // namespace ordot
