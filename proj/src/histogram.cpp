#include "ordot/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordot/error.hpp"

namespace ordot {

Histogram Histogram::make(std::span<const double> values, Normalization mode) {
  if (values.size() < 2) {
    throw ShapeError("histogram needs at least 2 classes, got " + std::to_string(values.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) {
      throw InvalidMass("histogram entry " + std::to_string(i) + " is not finite");
    }
    if (v < 0.0) {
      throw InvalidMass("histogram entry " + std::to_string(i) + " is negative");
    }
    total += v;
  }

  std::vector<double> out(values.begin(), values.end());
  if (mode == Normalization::kStrict) {
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw InvalidMass("histogram mass " + std::to_string(total) + " differs from 1");
    }
    return Histogram(std::move(out));
  }

  if (total <= 0.0) throw DegenerateHistogram("histogram has zero total mass");
  for (double& v : out) v /= total;
  return Histogram(std::move(out));
}

int Histogram::argmax() const {
  return static_cast<int>(std::max_element(values_.begin(), values_.end()) - values_.begin());
}

OneHotLabel::OneHotLabel(int true_class, int n_classes)
    : true_class_(true_class), n_classes_(n_classes) {
  if (n_classes < 2) throw ShapeError("need at least 2 classes");
  if (true_class < 0 || true_class >= n_classes) {
    throw InvalidClass("class " + std::to_string(true_class) + " outside [0, " +
                       std::to_string(n_classes) + ")");
  }
}

Histogram make_histogram(std::span<const double> values, Normalization mode) {
  return Histogram::make(values, mode);
}

Histogram one_hot(int j_star, int n) {
  const OneHotLabel label(j_star, n);
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(j_star)] = 1.0;
  return Histogram::make(v, Normalization::kStrict);
}

std::vector<double> cumulative(const Histogram& h) {
  std::vector<double> out(h.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    acc += h[i];
    out[i] = acc;
  }
  return out;
}

void require_same_size(const Histogram& a, const Histogram& b) {
  if (a.size() != b.size()) {
    throw ShapeError("histogram sizes differ: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

}  // namespace ordot
