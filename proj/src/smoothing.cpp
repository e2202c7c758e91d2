#include "ordot/smoothing.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ordot/error.hpp"

namespace ordot {

void SmoothingConfig::validate() const {
  if (!(xi >= 0.0 && xi <= 1.0) || !(eta >= 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "smoothing weights must lie in [0, 1], got xi=" << xi << " eta=" << eta;
    throw InvalidMixture(os.str());
  }
  if (xi + eta > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "xi + eta must not exceed 1, got " << xi + eta;
    throw InvalidMixture(os.str());
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    std::ostringstream os;
    os << "tau must be > 0, got " << tau;
    throw ConfigError(os.str());
  }
}

Histogram unimodal_distribution(int j_star, int n, double tau, UnimodalNorm norm) {
  const OneHotLabel label(j_star, n);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be > 0");
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(-std::abs(i - j_star) / tau);
    // v lies in (0, 1], so exp(v) cannot overflow.
    p[static_cast<std::size_t>(i)] = norm == UnimodalNorm::kSoftmax ? std::exp(v) : v;
  }
  return Histogram::make(p, Normalization::kRenormalize);
}

Histogram smooth_label(const OneHotLabel& label, const SmoothingConfig& cfg) {
  cfg.validate();
  const int n = label.n_classes();
  const Histogram p = unimodal_distribution(label.true_class(), n, cfg.tau, cfg.unimodal_norm);
  const double keep = std::max(0.0, 1.0 - cfg.xi - cfg.eta);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double delta = j == label.true_class() ? 1.0 : 0.0;
    t[static_cast<std::size_t>(j)] = keep * delta + cfg.xi * p[static_cast<std::size_t>(j)] + cfg.eta / n;
  }
  return Histogram::make(t, Normalization::kRenormalize);
}

SmoothedTargets::SmoothedTargets(int n_classes, const SmoothingConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  targets_.reserve(static_cast<std::size_t>(n_classes));
  for (int j = 0; j < n_classes; ++j) targets_.push_back(smooth_label(OneHotLabel(j, n_classes), cfg_));
}

}  // namespace ordot
