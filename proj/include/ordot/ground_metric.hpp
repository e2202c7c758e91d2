#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>

namespace ordot {

namespace metric {
struct Linear {};
struct Power {
  double rho = 2.0;
};
struct Huber {
  double tau = 1.0;
};
struct Step {};
}  // namespace metric

// Cost f(d) applied to the class distance d = |i - j|.
class MetricFamily {
 public:
  using Variant = std::variant<metric::Linear, metric::Power, metric::Huber, metric::Step>;

  MetricFamily() = default;
  MetricFamily(metric::Linear v) : variant_(v) {}
  MetricFamily(metric::Power v);
  MetricFamily(metric::Huber v);
  MetricFamily(metric::Step v) : variant_(v) {}

  static MetricFamily linear() { return metric::Linear{}; }
  static MetricFamily power(double rho) { return metric::Power{rho}; }
  static MetricFamily huber(double tau) { return metric::Huber{tau}; }
  static MetricFamily step() { return metric::Step{}; }

  double operator()(double d) const;

  // Linear, Power and Huber are convex in d; Step is concave.
  bool is_convex() const noexcept { return !std::holds_alternative<metric::Step>(variant_); }
  bool is_step() const noexcept { return std::holds_alternative<metric::Step>(variant_); }
  bool is_linear() const noexcept { return std::holds_alternative<metric::Linear>(variant_); }

  const Variant& variant() const noexcept { return variant_; }
  std::string describe() const;

 private:
  Variant variant_ = metric::Linear{};
};

double base_distance(int i, int j);

// Symmetric N x N cost matrix with entries f(|i - j|).
class GroundMatrix {
 public:
  GroundMatrix(int n, MetricFamily family);

  int size() const noexcept { return static_cast<int>(costs_.rows()); }
  const Eigen::MatrixXd& costs() const noexcept { return costs_; }
  double operator()(int i, int j) const { return costs_(i, j); }
  const MetricFamily& family() const noexcept { return family_; }

 private:
  Eigen::MatrixXd costs_;
  MetricFamily family_;
};

GroundMatrix build_ground_matrix(int n, const MetricFamily& family);

}  // namespace ordot
