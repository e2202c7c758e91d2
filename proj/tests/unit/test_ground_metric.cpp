#include "doctest.h"
#include "ordot/error.hpp"
#include "ordot/ground_metric.hpp"

using namespace ordot;

namespace {
void check_matrix(const GroundMatrix& g, const std::vector<std::vector<double>>& expected) {
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) CHECK(g(i, j) == expected[i][j]);
  }
}
}  // namespace

TEST_CASE("base_distance") {
  CHECK(base_distance(2, 4) == 2);
  CHECK(base_distance(3, 3) == 0);
  CHECK(base_distance(0, 4) == 4);
}

TEST_CASE("ground matrices for the small examples") {
  check_matrix(build_ground_matrix(3, MetricFamily::linear()), {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  check_matrix(build_ground_matrix(3, MetricFamily::power(2)), {{0, 1, 4}, {1, 0, 1}, {4, 1, 0}});
  // Huber tau=1 at d=2: tau (2d - tau) = 1 * (4 - 1) = 3.
  check_matrix(build_ground_matrix(3, MetricFamily::huber(1)), {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
  check_matrix(build_ground_matrix(3, MetricFamily::step()), {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

TEST_CASE("huber matches its piecewise definition") {
  const auto f = MetricFamily::huber(2.5);
  for (int d = 0; d < 10; ++d) {
    const double expected = d <= 2.5 ? d * d : 2.5 * (2.0 * d - 2.5);
    CHECK(f(d) == doctest::Approx(expected));
  }
}

TEST_CASE("invalid families") {
  CHECK_THROWS_AS(MetricFamily::power(0.5), NonConvexMetric);
  CHECK_THROWS_AS(MetricFamily::huber(0.0), ConfigError);
  CHECK_THROWS_AS(build_ground_matrix(1, MetricFamily::linear()), ShapeError);
  CHECK_NOTHROW(MetricFamily::power(1.5));
}

TEST_CASE("ground matrix structure for every family") {
  const std::vector<MetricFamily> families{MetricFamily::linear(),   MetricFamily::power(1.5),
                                           MetricFamily::power(2),   MetricFamily::power(3),
                                           MetricFamily::huber(1),   MetricFamily::huber(2),
                                           MetricFamily::step()};
  for (const auto& family : families) {
    CAPTURE(family.describe());
    for (int n = 2; n <= 10; ++n) {
      const auto g = build_ground_matrix(n, family);
      for (int i = 0; i < n; ++i) {
        CHECK(g(i, i) == 0.0);
        for (int j = 0; j < n; ++j) {
          CHECK(g(i, j) == g(j, i));
          CHECK(g(i, j) >= 0.0);
          // Toeplitz: depends on |i - j| only.
          CHECK(g(i, j) == g(0, std::abs(i - j)));
        }
        for (int j = i + 1; j + 1 < n; ++j) CHECK(g(i, j + 1) >= g(i, j));
      }
      if (family.is_convex()) {
        for (int d = 0; d + 2 < n; ++d) {
          CHECK(g(0, d + 2) - g(0, d + 1) >= g(0, d + 1) - g(0, d) - 1e-12);
        }
      }
    }
  }
}
