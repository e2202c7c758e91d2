#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ordot/error.hpp"
#include "ordot/exact.hpp"
#include "ordot/loss.hpp"
#include "ordot/smoothing.hpp"
#include "support/gradient_check.hpp"
#include "support/test_support.hpp"

using namespace ordot;

namespace {

LossSpec make_spec(LossKind kind, MetricFamily family = MetricFamily::linear(),
                   std::optional<SmoothingConfig> smoothing = std::nullopt) {
  LossSpec spec;
  spec.kind = kind;
  spec.family = family;
  spec.smoothing = smoothing;
  return spec;
}

// Logits whose softmax is exactly proportional to p.
std::vector<double> logits_for(const std::vector<double>& p) {
  std::vector<double> z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) z[i] = std::log(p[i]);
  return z;
}

}  // namespace

TEST_CASE("softmax") {
  const auto u = softmax(std::vector<double>{0, 0, 0});
  for (int i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  for (double c : {-3.0, 0.5, 4.0}) {
    const auto s = softmax(std::vector<double>{1.7, 1.7 + c});
    CHECK(s[1] == doctest::Approx(1.0 / (1.0 + std::exp(-c))).epsilon(1e-14));
  }
  const auto big = softmax(std::vector<double>{1000, 0});
  CHECK(big[0] == 1.0);
  CHECK(big[1] >= 0.0);
  CHECK(big[1] < 1e-300);
  CHECK_THROWS_AS(softmax(std::vector<double>{0, NAN}), InvalidMass);
}

TEST_CASE("saturated cross-entropy") {
  const auto r = loss_and_grad(std::vector<double>{-20, 40, -20}, OneHotLabel(1, 3), make_spec(LossKind::kCrossEntropy));
  CHECK(r.value < 1e-20);
  for (double g : r.grad_logits) CHECK(std::abs(g) < 1e-20);
}

TEST_CASE("one-hot transport loss value and gradient") {
  const auto z = logits_for({0.1, 0.2, 0.4, 0.2, 0.1});
  const auto spec = make_spec(LossKind::kWassersteinOneHot);
  const auto r = loss_and_grad(z, OneHotLabel(2, 5), spec);
  CHECK(r.value == doctest::Approx(0.8).epsilon(1e-14));
  const LossFunction loss(spec, 5);
  const auto numeric = testing::central_difference([&](const std::vector<double>& x) { return loss.value(x, 2); }, z);
  CHECK(testing::relative_error(r.grad_logits, numeric) < 1e-7);
}

TEST_CASE("values compose with the closed forms and the smoothing table") {
  std::mt19937_64 rng(3);
  const SmoothingConfig smooth;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 6;
    const auto z = testing::random_logits(rng, n);
    const int j = trial % n;
    const auto s = softmax(z);
    const auto t = smooth_label(OneHotLabel(j, n), smooth);
    const auto g2 = build_ground_matrix(n, MetricFamily::power(2));
    CHECK(std::abs(loss_and_grad(z, OneHotLabel(j, n), make_spec(LossKind::kWassersteinLinear, MetricFamily::linear(), smooth)).value -
                   wasserstein_linear(s, t)) <= 1e-12);
    CHECK(std::abs(loss_and_grad(z, OneHotLabel(j, n), make_spec(LossKind::kWassersteinConvex, MetricFamily::power(2), smooth)).value -
                   wasserstein_convex(s, t, g2)) <= 1e-12);
    CHECK(std::abs(loss_and_grad(z, OneHotLabel(j, n), make_spec(LossKind::kWassersteinStep, MetricFamily::step(), smooth)).value -
                   wasserstein_step(s, t)) <= 1e-12);
    double ce = 0.0;
    for (int i = 0; i < n; ++i) ce -= t[i] * std::log(s[i]);
    CHECK(loss_and_grad(z, OneHotLabel(j, n), make_spec(LossKind::kSmoothedCrossEntropy, MetricFamily::linear(), smooth)).value ==
          doctest::Approx(ce).epsilon(1e-12));
    CHECK(loss_and_grad(z, OneHotLabel(j, n), make_spec(LossKind::kCrossEntropy)).value ==
          doctest::Approx(-std::log(s[j])).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  std::uint64_t seed = 100;
  for (const auto& named : testing::gradient_specs()) {
    for (int n : {3, 5, 8}) {
      CAPTURE(named.name);
      CAPTURE(n);
      const auto sweep = testing::sweep_gradients(named.spec, n, 25, seed++);
      CHECK(sweep.failed == 0);
      CHECK(sweep.worst < 1e-5);
      CHECK(sweep.skip_rate() < 0.05);
    }
  }
}

TEST_CASE("logit gradients sum to zero") {
  std::mt19937_64 rng(5);
  for (const auto& named : testing::gradient_specs()) {
    const LossFunction loss(named.spec, 6);
    for (int trial = 0; trial < 10; ++trial) {
      const auto z = testing::random_logits(rng, 6);
      const auto g = loss.evaluate(z, trial % 6).grad_logits;
      CAPTURE(named.name);
      CHECK(std::abs(std::accumulate(g.begin(), g.end(), 0.0)) < 1e-9);
      for (double v : g) CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("transport losses are nonnegative and vanish at the target") {
  std::mt19937_64 rng(8);
  for (const auto& named : testing::gradient_specs()) {
    if (named.spec.kind == LossKind::kCrossEntropy || named.spec.kind == LossKind::kSmoothedCrossEntropy ||
        named.spec.kind == LossKind::kRegression || named.spec.kind == LossKind::kSinkhorn) {
      continue;
    }
    const LossFunction loss(named.spec, 5);
    for (int trial = 0; trial < 20; ++trial) {
      CHECK(loss.value(testing::random_logits(rng, 5), trial % 5) >= 0.0);
    }
    if (named.spec.smoothing) {
      for (int j = 0; j < 5; ++j) {
        const auto z = logits_for(loss.target(j).vector());
        CAPTURE(named.name);
        CHECK(loss.value(z, j) < 1e-12);
      }
    }
  }
}

TEST_CASE("moving mass toward the true class lowers the transport loss only") {
  // Same s_{j*}; the second prediction keeps its error mass next to j*.
  const std::vector<double> far{0.3, 0.05, 0.6, 0.0, 0.05};
  const std::vector<double> near{0.0, 0.3, 0.6, 0.05, 0.05};
  const auto pf = make_histogram(far, Normalization::kStrict);
  const auto pn = make_histogram(near, Normalization::kStrict);
  const auto label = OneHotLabel(2, 5);
  for (auto family : {MetricFamily::linear(), MetricFamily::power(2), MetricFamily::huber(1)}) {
    const auto g = build_ground_matrix(5, family);
    CHECK(wasserstein_onehot(pn, label, g) < wasserstein_onehot(pf, label, g));
  }
  CHECK(-std::log(pf[2]) == -std::log(pn[2]));
}

TEST_CASE("regression readouts") {
  const auto z = logits_for({0.1, 0.1, 0.6, 0.1, 0.1});
  CHECK(regression_readout_loss(z, OneHotLabel(2, 5), MetricFamily::power(2)) == 0.0);
  CHECK(regression_readout_loss(z, OneHotLabel(4, 5), MetricFamily::power(2)) == 4.0);
  CHECK(regression_readout_loss(z, OneHotLabel(0, 5), MetricFamily::linear()) == 2.0);
  CHECK(expected_class_loss(std::vector<double>(5, 0.0), OneHotLabel(2, 5)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(expected_class_loss(std::vector<double>(5, 0.0), OneHotLabel(0, 5)) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("inconsistent specs are rejected") {
  CHECK_THROWS_AS(LossFunction(make_spec(LossKind::kWassersteinConvex, MetricFamily::step()), 5), ConfigError);
  CHECK_THROWS_AS(LossFunction(make_spec(LossKind::kSmoothedCrossEntropy), 5), ConfigError);
  CHECK_THROWS_AS(LossFunction(make_spec(LossKind::kCrossEntropy, MetricFamily::linear(), SmoothingConfig{}), 5), ConfigError);
  CHECK_THROWS_AS(LossFunction(make_spec(LossKind::kWassersteinLinear, MetricFamily::linear(), SmoothingConfig{0.9, 0.9, 1.0}), 5),
                  InvalidMixture);
  CHECK_THROWS_AS(loss_kind_from_string("hinge"), ConfigError);
  for (auto kind : {LossKind::kWassersteinOneHot, LossKind::kWassersteinLinear, LossKind::kWassersteinConvex,
                    LossKind::kWassersteinStep, LossKind::kCrossEntropy, LossKind::kSmoothedCrossEntropy,
                    LossKind::kRegression, LossKind::kSinkhorn}) {
    CHECK(loss_kind_from_string(to_string(kind)) == kind);
  }
  const LossFunction loss(make_spec(LossKind::kCrossEntropy), 3);
  CHECK_THROWS_AS(loss.evaluate(std::vector<double>{0, 0}, 0), ShapeError);
  CHECK_THROWS_AS(loss.evaluate(std::vector<double>{0, 0, 0}, 3), InvalidClass);
}

TEST_CASE("batch evaluation averages per-sample results") {
  std::mt19937_64 rng(21);
  const LossFunction loss(make_spec(LossKind::kWassersteinConvex, MetricFamily::power(2), SmoothingConfig{}), 4);
  Eigen::MatrixXd z(6, 4);
  std::vector<int> labels{0, 1, 2, 3, 2, 1};
  for (int r = 0; r < 6; ++r) {
    const auto row = testing::random_logits(rng, 4);
    for (int c = 0; c < 4; ++c) z(r, c) = row[static_cast<std::size_t>(c)];
  }
  const auto batch = loss.evaluate_batch(z, labels);
  double mean = 0.0;
  for (int r = 0; r < 6; ++r) {
    std::vector<double> row(4);
    for (int c = 0; c < 4; ++c) row[static_cast<std::size_t>(c)] = z(r, c);
    const auto single = loss.evaluate(row, labels[static_cast<std::size_t>(r)]);
    mean += single.value / 6;
    for (int c = 0; c < 4; ++c) CHECK(batch.grad_logits(r, c) == doctest::Approx(single.grad_logits[static_cast<std::size_t>(c)] / 6));
  }
  CHECK(batch.mean_value == doctest::Approx(mean).epsilon(1e-14));
  CHECK_THROWS_AS(loss.evaluate_batch(z, std::vector<int>{0, 1}), ShapeError);
}
