#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordot/ground_metric.hpp"
#include "ordot/histogram.hpp"
#include "ordot/sinkhorn.hpp"
#include "ordot/smoothing.hpp"

namespace ordot {

enum class LossKind {
  kWassersteinOneHot,     // sum_i s_i f(|i - j*|)
  kWassersteinLinear,     // cumulative-difference closed form
  kWassersteinConvex,     // monotone coupling under a convex family
  kWassersteinStep,       // half l1
  kCrossEntropy,          // -log s_{j*}
  kSmoothedCrossEntropy,  // -sum_i t_i log s_i against the smoothed target
  kRegression,            // (sum_i i s_i - j*)^2
  kSinkhorn,              // entropic transport, the approximate baseline
};

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

struct LossSpec {
  LossKind kind = LossKind::kCrossEntropy;
  MetricFamily family = MetricFamily::linear();
  // When set, Wasserstein and Sinkhorn kinds compare against the smoothed target.
  std::optional<SmoothingConfig> smoothing;
  SinkhornConfig sinkhorn;

  void validate() const;
};

struct LossValueGrad {
  double value = 0.0;
  std::vector<double> grad_logits;
};

struct BatchLoss {
  double mean_value = 0.0;
  Eigen::MatrixXd grad_logits;  // one row per sample, already divided by the batch size
};

Histogram softmax(std::span<const double> logits);
inline Histogram softmax(const std::vector<double>& logits) { return softmax(std::span<const double>(logits)); }

// A validated loss bound to a class count, with its ground matrix and
// per-class targets precomputed.
class LossFunction {
 public:
  LossFunction(LossSpec spec, int n_classes);

  int n_classes() const noexcept { return n_classes_; }
  const LossSpec& spec() const noexcept { return spec_; }
  const GroundMatrix& ground() const noexcept { return ground_; }
  // The histogram the prediction is compared against for class j*.
  const Histogram& target(int j_star) const;

  LossValueGrad evaluate(std::span<const double> logits, int j_star) const;
  double value(std::span<const double> logits, int j_star) const;
  BatchLoss evaluate_batch(const Eigen::MatrixXd& logits, std::span<const int> labels) const;

  // Distance of softmax(logits) from the set where the loss is not
  // differentiable (infinite for smooth losses). For the linear form this is
  // min_j |phi_j|.
  double kink_margin(std::span<const double> logits, int j_star) const;

 private:
  std::vector<double> grad_wrt_probs(const Histogram& s, int j_star) const;
  double value_from_probs(const Histogram& s, std::span<const double> logits, int j_star) const;

  LossSpec spec_;
  int n_classes_;
  GroundMatrix ground_;
  std::vector<Histogram> targets_;
};

LossValueGrad loss_and_grad(std::span<const double> logits, const OneHotLabel& label, const LossSpec& spec);

// f(|argmax(s) - j*|). Piecewise constant; evaluation only.
double regression_readout_loss(std::span<const double> logits, const OneHotLabel& label,
                               const MetricFamily& family);

// (sum_i i s_i - j*)^2, the differentiable readout used for training.
double expected_class_loss(std::span<const double> logits, const OneHotLabel& label);

}  // namespace ordot
