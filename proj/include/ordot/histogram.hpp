#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ordot {

// Absolute tolerance on the total mass of a histogram.
inline constexpr double kMassTolerance = 1e-9;

enum class Normalization {
  kStrict,       // reject unless the entries already sum to one
  kRenormalize,  // divide by the total mass
};

// A probability vector over N >= 2 ordered classes. Immutable once built.
class Histogram {
 public:
  static Histogram make(std::span<const double> values, Normalization mode);

  std::size_t size() const noexcept { return values_.size(); }
  int n_classes() const noexcept { return static_cast<int>(values_.size()); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }

  // Index of the largest entry; the first one on ties.
  int argmax() const;

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  explicit Histogram(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

// A class index j* in [0, n_classes).
class OneHotLabel {
 public:
  OneHotLabel(int true_class, int n_classes);

  int true_class() const noexcept { return true_class_; }
  int n_classes() const noexcept { return n_classes_; }

 private:
  int true_class_;
  int n_classes_;
};

Histogram make_histogram(std::span<const double> values, Normalization mode);

inline Histogram make_histogram(const std::vector<double>& values, Normalization mode) {
  return make_histogram(std::span<const double>(values), mode);
}

Histogram one_hot(int j_star, int n);

inline Histogram one_hot(const OneHotLabel& label) {
  return one_hot(label.true_class(), label.n_classes());
}

// Prefix sums of the histogram masses.
std::vector<double> cumulative(const Histogram& h);

// Throws ShapeError unless both histograms have the same number of classes.
void require_same_size(const Histogram& a, const Histogram& b);

}  // namespace ordot
