#include <random>

#include "doctest.h"
#include "ordot/error.hpp"
#include "ordot/exact.hpp"
#include "ordot/lp_oracle.hpp"
#include "ordot/sinkhorn.hpp"
#include "support/test_support.hpp"

using namespace ordot;

namespace {
Histogram H(std::vector<double> v) { return make_histogram(v, Normalization::kStrict); }
}  // namespace

TEST_CASE("identical histograms") {
  const auto s = H({0.2, 0.3, 0.5});
  const auto g = build_ground_matrix(3, MetricFamily::linear());
  double previous = 1e9;
  for (double eps : {1.0, 0.3, 0.1, 0.03, 0.01}) {
    SinkhornConfig cfg;
    cfg.epsilon = eps;
    const double c = sinkhorn_distance(s, s, g, cfg).cost;
    CHECK(c >= 0.0);
    CHECK(c <= previous + 1e-12);
    previous = c;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("two-bin instance at small epsilon") {
  SinkhornConfig cfg;
  cfg.epsilon = 0.01;
  const auto r = sinkhorn_distance(H({0.5, 0.5}), H({1, 0}), build_ground_matrix(2, MetricFamily::linear()), cfg);
  CHECK(std::abs(r.cost - wasserstein_linear(H({0.5, 0.5}), H({1, 0}))) < 0.01);
  CHECK(r.iterations >= 1);

  // Fully supported target: the entropic plan still concentrates.
  const auto r2 = sinkhorn_distance(H({0.5, 0.5}), H({0.9, 0.1}), build_ground_matrix(2, MetricFamily::linear()), cfg);
  CHECK(std::abs(r2.cost - 0.4) < 0.01);
}

TEST_CASE("error shrinks as epsilon decreases") {
  std::mt19937_64 rng(99);
  int monotone = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    const auto s = testing::random_histogram(rng, 8);
    const auto t = testing::random_histogram(rng, 8);
    const auto g = build_ground_matrix(8, MetricFamily::power(2));
    const double exact = lp_oracle(s, t, g).cost;
    double last = 1e9;
    bool ok = true;
    for (double eps : {0.5, 0.1, 0.02}) {
      // Past eps = 0.1 the entropic bias is below 1e-7, so the marginals
      // have to be resolved far beyond the default tolerance.
      SinkhornConfig cfg;
      cfg.epsilon = eps;
      cfg.convergence_tol = 1e-13;
      cfg.max_iters = 2000000;
      const double err = std::abs(sinkhorn_distance(s, t, g, cfg).cost - exact);
      ok = ok && err < last;
      last = err;
    }
    monotone += ok;
  }
  CHECK(monotone == trials);
}

TEST_CASE("converged plans respect the marginals") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 6;
    const auto s = testing::random_histogram(rng, n, 0.2);
    const auto t = testing::random_histogram(rng, n, 0.2);
    SinkhornConfig cfg;
    cfg.epsilon = trial % 2 ? 0.2 : 0.03;
    const auto r = sinkhorn(s, t, build_ground_matrix(n, MetricFamily::huber(1)), cfg);
    REQUIRE(r.converged);
    CHECK(r.marginal_violation < cfg.convergence_tol);
    for (int i = 0; i < n; ++i) CHECK(std::abs(r.plan.row(i).sum() - s[i]) < 1e-7);
    for (int j = 0; j < n; ++j) CHECK(std::abs(r.plan.col(j).sum() - t[j]) < 1e-7);
  }
}

TEST_CASE("plain and log domains agree") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = testing::random_histogram(rng, 6);
    const auto t = testing::random_histogram(rng, 6);
    const auto g = build_ground_matrix(6, MetricFamily::power(2));
    SinkhornConfig plain;
    plain.epsilon = 0.2;
    plain.domain = SinkhornDomain::kPlain;
    SinkhornConfig logd = plain;
    logd.domain = SinkhornDomain::kLog;
    CHECK(sinkhorn(s, t, g, plain).cost == doctest::Approx(sinkhorn(s, t, g, logd).cost).epsilon(1e-8));
  }
}

TEST_CASE("kernel underflow is reported in the plain domain") {
  const auto g = build_ground_matrix(8, MetricFamily::power(3));
  SinkhornConfig cfg;
  cfg.epsilon = 0.1;
  cfg.domain = SinkhornDomain::kPlain;
  CHECK_THROWS_AS(sinkhorn(one_hot(0, 8), one_hot(7, 8), g, cfg), UnderflowError);
  cfg.domain = SinkhornDomain::kLog;
  CHECK(sinkhorn(one_hot(0, 8), one_hot(7, 8), g, cfg).cost == doctest::Approx(343.0));
}

TEST_CASE("invalid configs") {
  const auto s = H({0.5, 0.5});
  const auto g = build_ground_matrix(2, MetricFamily::linear());
  CHECK_THROWS_AS(sinkhorn(s, s, g, SinkhornConfig{0.0}), ConfigError);
  CHECK_THROWS_AS(sinkhorn(s, s, g, SinkhornConfig{0.1, 0}), ConfigError);
  CHECK_THROWS_AS(sinkhorn(s, s, g, SinkhornConfig{0.1, 10, -1.0}), ConfigError);
  CHECK_THROWS_AS(sinkhorn(s, H({0.2, 0.3, 0.5}), g), ShapeError);
}
