#pragma once

#include <vector>

#include "ordot/histogram.hpp"

namespace ordot {

// How the sampled exponential e^{-|i - j*| / tau} is turned into a distribution.
enum class UnimodalNorm {
  kSoftmax,  // p_i = exp(v_i) / sum_k exp(v_k)
  kSum,      // p_i = v_i / sum_k v_k
};

struct SmoothingConfig {
  double xi = 0.15;   // weight of the unimodal component
  double eta = 0.05;  // weight of the uniform component
  double tau = 1.0;   // unimodal temperature
  UnimodalNorm unimodal_norm = UnimodalNorm::kSoftmax;

  void validate() const;
};

Histogram unimodal_distribution(int j_star, int n, double tau, UnimodalNorm norm);

// (1 - xi - eta) * one_hot(j*) + xi * unimodal(j*) + eta / N.
Histogram smooth_label(const OneHotLabel& label, const SmoothingConfig& cfg);

// One smoothed target per class, built once and shared read-only.
class SmoothedTargets {
 public:
  SmoothedTargets(int n_classes, const SmoothingConfig& cfg);

  int n_classes() const noexcept { return static_cast<int>(targets_.size()); }
  const Histogram& operator[](int j_star) const { return targets_.at(static_cast<std::size_t>(j_star)); }
  const SmoothingConfig& config() const noexcept { return cfg_; }

 private:
  SmoothingConfig cfg_;
  std::vector<Histogram> targets_;
};

}  // namespace ordot
