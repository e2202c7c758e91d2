#include "ordot/ground_metric.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ordot/error.hpp"

namespace ordot {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

MetricFamily::MetricFamily(metric::Power v) : variant_(v) {
  if (!(v.rho >= 1.0) || !std::isfinite(v.rho)) {
    std::ostringstream os;
    os << "power metric needs rho >= 1, got " << v.rho;
    throw NonConvexMetric(os.str());
  }
}

MetricFamily::MetricFamily(metric::Huber v) : variant_(v) {
  if (!(v.tau > 0.0) || !std::isfinite(v.tau)) {
    std::ostringstream os;
    os << "huber metric needs tau > 0, got " << v.tau;
    throw ConfigError(os.str());
  }
}

double MetricFamily::operator()(double d) const {
  return std::visit(
      Overloaded{
          [d](metric::Linear) { return d; },
          [d](metric::Power p) { return d == 0.0 ? 0.0 : std::pow(d, p.rho); },
          [d](metric::Huber h) { return d <= h.tau ? d * d : h.tau * (2.0 * d - h.tau); },
          [d](metric::Step) { return d != 0.0 ? 1.0 : 0.0; },
      },
      variant_);
}

std::string MetricFamily::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](metric::Linear) { os << "linear"; },
                 [&](metric::Power p) { os << "power(" << p.rho << ")"; },
                 [&](metric::Huber h) { os << "huber(" << h.tau << ")"; },
                 [&](metric::Step) { os << "step"; },
             },
             variant_);
  return os.str();
}

double base_distance(int i, int j) { return static_cast<double>(std::abs(i - j)); }

GroundMatrix::GroundMatrix(int n, MetricFamily family) : family_(family) {
  if (n < 2) throw ShapeError("ground matrix needs n >= 2");
  costs_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) costs_(i, j) = family_(base_distance(i, j));
  }
}

GroundMatrix build_ground_matrix(int n, const MetricFamily& family) {
  return GroundMatrix(n, family);
}

}  // namespace ordot
