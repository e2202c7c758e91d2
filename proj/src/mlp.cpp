#include "ordot/mlp.hpp"

#include <cmath>
#include <random>

#include "ordot/error.hpp"

namespace ordot {

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  }
  return m;
}

template <class T>
void adam_update(T& param, const T& grad, T& m, T& v, double lr, double b1, double b2, double eps, long step) {
  m = b1 * m + (1.0 - b1) * grad;
  v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
  param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

}  // namespace

MlpModel::MlpModel(int input_dim, int hidden_dim, int n_classes, Activation activation, std::uint64_t seed)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), n_classes_(n_classes), activation_(activation) {
  if (input_dim < 1 || hidden_dim < 0 || n_classes < 2) {
    throw ConfigError("MLP needs input_dim >= 1, hidden_dim >= 0, n_classes >= 2");
  }
  std::mt19937_64 rng(seed);
  if (hidden_dim > 0) {
    const double gain = activation == Activation::kRelu ? 2.0 : 1.0;
    w1 = gaussian(hidden_dim, input_dim, std::sqrt(gain / input_dim), rng);
    b1 = Eigen::VectorXd::Zero(hidden_dim);
    w2 = gaussian(n_classes, hidden_dim, std::sqrt(1.0 / hidden_dim), rng);
  } else {
    w2 = gaussian(n_classes, input_dim, std::sqrt(1.0 / input_dim), rng);
  }
  b2 = Eigen::VectorXd::Zero(n_classes);
}

Eigen::MatrixXd MlpModel::hidden(const Eigen::MatrixXd& x, Eigen::MatrixXd* pre) const {
  if (hidden_dim_ == 0) return x;
  Eigen::MatrixXd z = (x * w1.transpose()).rowwise() + b1.transpose();
  if (pre) *pre = z;
  if (activation_ == Activation::kRelu) return z.cwiseMax(0.0);
  return z.array().tanh().matrix();
}

Eigen::MatrixXd MlpModel::logits(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) throw ShapeError("feature width does not match the model input");
  return (hidden(x) * w2.transpose()).rowwise() + b2.transpose();
}

Eigen::MatrixXd MlpModel::probabilities(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd z = logits(x);
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double m = z.row(r).maxCoeff();
    z.row(r) = (z.row(r).array() - m).exp().matrix();
    z.row(r) /= z.row(r).sum();
  }
  return z;
}

MlpGradients MlpModel::backward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& grad_logits) const {
  MlpGradients g;
  Eigen::MatrixXd pre;
  const Eigen::MatrixXd h = hidden(x, &pre);
  g.w2 = grad_logits.transpose() * h;
  g.b2 = grad_logits.colwise().sum().transpose();
  if (hidden_dim_ == 0) return g;

  Eigen::MatrixXd dh = grad_logits * w2;
  if (activation_ == Activation::kRelu) {
    dh = dh.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  } else {
    dh = dh.cwiseProduct((1.0 - h.array().square()).matrix());
  }
  g.w1 = dh.transpose() * x;
  g.b1 = dh.colwise().sum().transpose();
  return g;
}

bool MlpModel::all_finite() const {
  return w2.allFinite() && b2.allFinite() && (hidden_dim_ == 0 || (w1.allFinite() && b1.allFinite()));
}

Optimizer::Optimizer(const MlpModel& model, OptimizerKind kind, double weight_decay)
    : kind_(kind), weight_decay_(weight_decay) {
  m_.w1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
  m_.w2 = Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols());
  m_.b1 = Eigen::VectorXd::Zero(model.b1.size());
  m_.b2 = Eigen::VectorXd::Zero(model.b2.size());
  v_ = m_;
}

void Optimizer::step(MlpModel& model, MlpGradients grads, double learning_rate) {
  const bool has_hidden = model.hidden_dim() > 0;
  grads.w2 += weight_decay_ * model.w2;
  if (has_hidden) grads.w1 += weight_decay_ * model.w1;

  if (kind_ == OptimizerKind::kSgd) {
    model.w2 -= learning_rate * grads.w2;
    model.b2 -= learning_rate * grads.b2;
    if (has_hidden) {
      model.w1 -= learning_rate * grads.w1;
      model.b1 -= learning_rate * grads.b1;
    }
    return;
  }

  ++steps_;
  adam_update(model.w2, grads.w2, m_.w2, v_.w2, learning_rate, beta1_, beta2_, eps_, steps_);
  adam_update(model.b2, grads.b2, m_.b2, v_.b2, learning_rate, beta1_, beta2_, eps_, steps_);
  if (has_hidden) {
    adam_update(model.w1, grads.w1, m_.w1, v_.w1, learning_rate, beta1_, beta2_, eps_, steps_);
    adam_update(model.b1, grads.b1, m_.b1, v_.b1, learning_rate, beta1_, beta2_, eps_, steps_);
  }
}

}  // namespace ordot
