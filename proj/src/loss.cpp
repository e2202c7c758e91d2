#include "ordot/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ordot/error.hpp"
#include "ordot/exact.hpp"

namespace ordot {

namespace {

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double acc = 0.0;
  for (double v : z) acc += std::exp(v - m);
  return m + std::log(acc);
}

bool uses_smoothed_target(const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::kWassersteinLinear:
    case LossKind::kWassersteinConvex:
    case LossKind::kWassersteinStep:
    case LossKind::kSinkhorn:
    case LossKind::kSmoothedCrossEntropy:
      return spec.smoothing.has_value();
    default:
      return false;
  }
}

}  // namespace

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kWassersteinOneHot: return "wasserstein_onehot";
    case LossKind::kWassersteinLinear: return "wasserstein_linear";
    case LossKind::kWassersteinConvex: return "wasserstein_convex";
    case LossKind::kWassersteinStep: return "wasserstein_step";
    case LossKind::kCrossEntropy: return "cross_entropy";
    case LossKind::kSmoothedCrossEntropy: return "smoothed_cross_entropy";
    case LossKind::kRegression: return "regression";
    case LossKind::kSinkhorn: return "sinkhorn";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
  for (LossKind k : {LossKind::kWassersteinOneHot, LossKind::kWassersteinLinear,
                     LossKind::kWassersteinConvex, LossKind::kWassersteinStep,
                     LossKind::kCrossEntropy, LossKind::kSmoothedCrossEntropy,
                     LossKind::kRegression, LossKind::kSinkhorn}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown loss kind '" + name + "'");
}

void LossSpec::validate() const {
  switch (kind) {
    case LossKind::kWassersteinConvex:
      if (family.is_step()) {
        throw ConfigError("wasserstein_convex needs a linear, power or huber family");
      }
      break;
    case LossKind::kSmoothedCrossEntropy:
      if (!smoothing) throw ConfigError("smoothed_cross_entropy needs a smoothing config");
      break;
    case LossKind::kWassersteinOneHot:
    case LossKind::kCrossEntropy:
    case LossKind::kRegression:
      if (smoothing) throw ConfigError(to_string(kind) + " compares against the one-hot label; drop smoothing");
      break;
    case LossKind::kSinkhorn:
      sinkhorn.validate();
      break;
    default:
      break;
  }
  if (smoothing) smoothing->validate();
}

Histogram softmax(std::span<const double> logits) {
  if (logits.empty()) throw ShapeError("softmax of an empty vector");
  for (double z : logits) {
    if (!std::isfinite(z)) throw InvalidMass("softmax logits must be finite");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> e(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) e[i] = std::exp(logits[i] - m);
  return Histogram::make(e, Normalization::kRenormalize);
}

LossFunction::LossFunction(LossSpec spec, int n_classes)
    : spec_(std::move(spec)), n_classes_(n_classes), ground_(n_classes, spec_.family) {
  spec_.validate();
  targets_.reserve(static_cast<std::size_t>(n_classes));
  if (uses_smoothed_target(spec_)) {
    const SmoothedTargets table(n_classes, *spec_.smoothing);
    for (int j = 0; j < n_classes; ++j) targets_.push_back(table[j]);
  } else {
    for (int j = 0; j < n_classes; ++j) targets_.push_back(one_hot(j, n_classes));
  }
}

const Histogram& LossFunction::target(int j_star) const {
  if (j_star < 0 || j_star >= n_classes_) {
    throw InvalidClass("class " + std::to_string(j_star) + " out of range");
  }
  return targets_[static_cast<std::size_t>(j_star)];
}

double LossFunction::value_from_probs(const Histogram& s, std::span<const double> logits, int j_star) const {
  const Histogram& t = target(j_star);
  switch (spec_.kind) {
    case LossKind::kWassersteinOneHot:
      return wasserstein_onehot(s, OneHotLabel(j_star, n_classes_), ground_);
    case LossKind::kWassersteinLinear:
      return wasserstein_linear(s, t);
    case LossKind::kWassersteinConvex:
      return wasserstein_convex(s, t, ground_);
    case LossKind::kWassersteinStep:
      return wasserstein_step(s, t);
    case LossKind::kCrossEntropy:
      return log_sum_exp(logits) - logits[static_cast<std::size_t>(j_star)];
    case LossKind::kSmoothedCrossEntropy: {
      const double lse = log_sum_exp(logits);
      double v = 0.0;
      for (int i = 0; i < n_classes_; ++i) v += t[static_cast<std::size_t>(i)] * (lse - logits[static_cast<std::size_t>(i)]);
      return v;
    }
    case LossKind::kRegression: {
      double mean = 0.0;
      for (int i = 0; i < n_classes_; ++i) mean += i * s[static_cast<std::size_t>(i)];
      return (mean - j_star) * (mean - j_star);
    }
    case LossKind::kSinkhorn: {
      // <P, D> + eps * KL(P || s (x) t): nonnegative and smooth in s.
      const auto r = sinkhorn(s, t, ground_, spec_.sinkhorn);
      double kl = 0.0;
      for (int i = 0; i < n_classes_; ++i) {
        for (int j = 0; j < n_classes_; ++j) {
          const double p = r.plan(i, j);
          if (p > 0.0) kl += p * std::log(p / (s[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j)]));
        }
      }
      return r.cost + spec_.sinkhorn.epsilon * kl;
    }
  }
  throw std::logic_error("unhandled loss kind");
}

std::vector<double> LossFunction::grad_wrt_probs(const Histogram& s, int j_star) const {
  const Histogram& t = target(j_star);
  std::vector<double> g(static_cast<std::size_t>(n_classes_), 0.0);
  switch (spec_.kind) {
    case LossKind::kWassersteinOneHot:
      for (int i = 0; i < n_classes_; ++i) g[static_cast<std::size_t>(i)] = ground_(i, j_star);
      return g;
    case LossKind::kWassersteinLinear:
      return wasserstein_linear_grad(s, t);
    case LossKind::kWassersteinConvex:
      return wasserstein_convex_grad(s, t, ground_);
    case LossKind::kWassersteinStep:
      return wasserstein_step_grad(s, t);
    case LossKind::kRegression: {
      double mean = 0.0;
      for (int i = 0; i < n_classes_; ++i) mean += i * s[static_cast<std::size_t>(i)];
      for (int i = 0; i < n_classes_; ++i) g[static_cast<std::size_t>(i)] = 2.0 * (mean - j_star) * i;
      return g;
    }
    case LossKind::kSinkhorn: {
      // Envelope theorem: the source dual potential minus eps log s, up to a constant.
      const auto r = sinkhorn(s, t, ground_, spec_.sinkhorn);
      for (int i = 0; i < n_classes_; ++i) {
        g[static_cast<std::size_t>(i)] =
            r.source_potential(i) - spec_.sinkhorn.epsilon * std::log(s[static_cast<std::size_t>(i)]);
      }
      return g;
    }
    case LossKind::kCrossEntropy:
    case LossKind::kSmoothedCrossEntropy:
      break;
  }
  throw std::logic_error("cross-entropy gradients are taken in logit space");
}

LossValueGrad LossFunction::evaluate(std::span<const double> logits, int j_star) const {
  if (static_cast<int>(logits.size()) != n_classes_) {
    throw ShapeError("expected " + std::to_string(n_classes_) + " logits, got " + std::to_string(logits.size()));
  }
  const Histogram s = softmax(logits);
  LossValueGrad out;
  out.value = value_from_probs(s, logits, j_star);
  out.grad_logits.resize(static_cast<std::size_t>(n_classes_));

  if (spec_.kind == LossKind::kCrossEntropy || spec_.kind == LossKind::kSmoothedCrossEntropy) {
    const Histogram& t = target(j_star);
    for (std::size_t i = 0; i < s.size(); ++i) out.grad_logits[i] = s[i] - t[i];
    return out;
  }

  // Softmax Jacobian: dL/dz_n = s_n (g_n - sum_i g_i s_i).
  const std::vector<double> g = grad_wrt_probs(s, j_star);
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) mean += g[i] * s[i];
  for (std::size_t n = 0; n < s.size(); ++n) out.grad_logits[n] = s[n] * (g[n] - mean);
  return out;
}

double LossFunction::value(std::span<const double> logits, int j_star) const {
  if (static_cast<int>(logits.size()) != n_classes_) throw ShapeError("logit count mismatch");
  return value_from_probs(softmax(logits), logits, j_star);
}

BatchLoss LossFunction::evaluate_batch(const Eigen::MatrixXd& logits, std::span<const int> labels) const {
  if (logits.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw ShapeError("batch has " + std::to_string(logits.rows()) + " logit rows but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (logits.cols() != n_classes_) throw ShapeError("logit width does not match the class count");
  BatchLoss out;
  out.grad_logits.resize(logits.rows(), logits.cols());
  if (logits.rows() == 0) return out;
  const double scale = 1.0 / static_cast<double>(logits.rows());
  std::vector<double> row(static_cast<std::size_t>(n_classes_));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    for (int c = 0; c < n_classes_; ++c) row[static_cast<std::size_t>(c)] = logits(r, c);
    const LossValueGrad lg = evaluate(row, labels[static_cast<std::size_t>(r)]);
    out.mean_value += lg.value * scale;
    for (int c = 0; c < n_classes_; ++c) out.grad_logits(r, c) = lg.grad_logits[static_cast<std::size_t>(c)] * scale;
  }
  return out;
}

double LossFunction::kink_margin(std::span<const double> logits, int j_star) const {
  const Histogram s = softmax(logits);
  const Histogram& t = target(j_star);
  const std::size_t n = s.size();
  double margin = std::numeric_limits<double>::infinity();
  switch (spec_.kind) {
    case LossKind::kWassersteinLinear: {
      double phi = 0.0;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        phi += s[j] - t[j];
        margin = std::min(margin, std::abs(phi));
      }
      break;
    }
    case LossKind::kWassersteinConvex: {
      const auto src = cumulative(s);
      const auto dst = cumulative(t);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        for (std::size_t j = 0; j + 1 < n; ++j) margin = std::min(margin, std::abs(src[k] - dst[j]));
      }
      break;
    }
    case LossKind::kWassersteinStep:
      for (std::size_t i = 0; i < n; ++i) margin = std::min(margin, std::abs(s[i] - t[i]));
      break;
    default:
      break;
  }
  return margin;
}

LossValueGrad loss_and_grad(std::span<const double> logits, const OneHotLabel& label, const LossSpec& spec) {
  if (static_cast<int>(logits.size()) != label.n_classes()) throw ShapeError("logit count does not match label");
  return LossFunction(spec, label.n_classes()).evaluate(logits, label.true_class());
}

double regression_readout_loss(std::span<const double> logits, const OneHotLabel& label,
                               const MetricFamily& family) {
  if (static_cast<int>(logits.size()) != label.n_classes()) throw ShapeError("logit count does not match label");
  const int predicted = softmax(logits).argmax();
  return family(base_distance(predicted, label.true_class()));
}

double expected_class_loss(std::span<const double> logits, const OneHotLabel& label) {
  if (static_cast<int>(logits.size()) != label.n_classes()) throw ShapeError("logit count does not match label");
  const Histogram s = softmax(logits);
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) mean += static_cast<double>(i) * s[i];
  return (mean - label.true_class()) * (mean - label.true_class());
}

}  // namespace ordot
