#include <algorithm>
#include <random>

#include "doctest.h"
#include "ordot/error.hpp"
#include "ordot/metrics.hpp"
#include "support/metric_reference.hpp"

using namespace ordot;

using V = std::vector<int>;

TEST_CASE("accuracy and mae") {
  CHECK(accuracy(V{0, 1, 2}, V{0, 1, 2}) == 1.0);
  CHECK(accuracy(V{1, 2, 0}, V{0, 1, 2}) == 0.0);
  CHECK(accuracy(V{0, 1, 2, 3}, V{0, 1, 2, 0}) == 0.75);
  CHECK(mae(V{3, 1}, V{3, 1}) == 0.0);
  CHECK(mae(V{0, 4}, V{4, 0}) == 4.0);
  CHECK(mae(V{1, 2}, V{2, 2}) == 0.5);
  CHECK_THROWS_AS(accuracy(V{0, 1}, V{0}), ShapeError);
  CHECK_THROWS_AS(mae(V{}, V{}), ShapeError);
}

TEST_CASE("qwk worked instance") {
  // Observed squared error 5 over 4 samples against 20 over all 16 pairs.
  CHECK(qwk(V{0, 2, 1, 0}, V{0, 1, 1, 2}, 3) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(testing::reference_qwk(V{0, 2, 1, 0}, V{0, 1, 1, 2}) == 0.0);
}

TEST_CASE("qwk perfect and degenerate") {
  CHECK(qwk(V{0, 1, 2, 3, 4}, V{0, 1, 2, 3, 4}, 5) == 1.0);
  CHECK(qwk(V{0, 0, 3}, V{0, 0, 3}, 5) == 1.0);
  CHECK_THROWS_AS(qwk(V{2, 2, 2}, V{2, 2, 2}, 5), DegenerateKappa);
  CHECK_THROWS_AS(qwk(V{0, 5}, V{0, 1}, 5), InvalidClass);
}

TEST_CASE("qwk matches the pairwise reference") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    const int samples = 2 + trial % 40;
    std::uniform_int_distribution<int> cls(0, n - 1);
    V p(static_cast<std::size_t>(samples));
    V t(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
      t[static_cast<std::size_t>(k)] = cls(rng);
      p[static_cast<std::size_t>(k)] = cls(rng);
    }
    if (std::all_of(p.begin(), p.end(), [&](int v) { return v == p[0]; }) &&
        std::all_of(t.begin(), t.end(), [&](int v) { return v == p[0]; })) {
      continue;
    }
    CHECK(std::abs(qwk(p, t, n) - testing::reference_qwk(p, t)) <= 1e-12);
  }
}

TEST_CASE("qwk of independent labels is near zero") {
  std::mt19937_64 rng(72);
  std::uniform_int_distribution<int> cls(0, 4);
  V t(10000);
  for (auto& v : t) v = cls(rng);
  V p = t;
  std::shuffle(p.begin(), p.end(), rng);
  CHECK(std::abs(qwk(p, t, 5)) < 0.1);
}

TEST_CASE("qwk of identical nonconstant labels is one") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> cls(0, 4);
    V x(20);
    for (auto& v : x) v = cls(rng);
    x[0] = 0;
    x[1] = 4;
    CHECK(qwk(x, x, 5) == 1.0);
  }
}

TEST_CASE("moving a prediction away from its truth does not raise qwk") {
  std::mt19937_64 rng(74);
  std::uniform_int_distribution<int> cls(0, 4);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    V t(30);
    V p(30);
    for (std::size_t k = 0; k < 30; ++k) {
      t[k] = cls(rng);
      p[k] = std::clamp(t[k] + std::uniform_int_distribution<int>(-1, 1)(rng), 0, 4);
    }
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 29)(rng);
    V moved = p;
    const int dir = p[k] > t[k] ? 1 : (p[k] < t[k] ? -1 : (t[k] < 2 ? 1 : -1));
    moved[k] = p[k] + dir;
    if (moved[k] < 0 || moved[k] > 4) continue;
    ++checked;
    CHECK(qwk(moved, t, 5) <= qwk(p, t, 5) + 1e-12);
  }
  CHECK(checked > 100);
}

TEST_CASE("split parsing") {
  const auto splits = parse_splits("0:1-4,0-1:2-4,0-2:3-4", 5);
  REQUIRE(splits.size() == 3);
  CHECK(splits[0].name == "0 vs 1-4");
  CHECK(splits[1].name == "0-1 vs 2-4");
  CHECK(splits[2].name == "0-2 vs 3-4");
  CHECK(splits[1].negative == V{0, 1});
  CHECK(splits[1].positive == V{2, 3, 4});
  CHECK_THROWS_AS(parse_splits("0:1-5", 5), ConfigError);
  CHECK_THROWS_AS(parse_splits("0-1", 5), ConfigError);
  CHECK_THROWS_AS(parse_splits("a:1", 5), ConfigError);
  CHECK_THROWS_AS(parse_splits("0-2:2-4", 5), ConfigError);
}

TEST_CASE("tnr at tpr examples") {
  CHECK(tnr_at_tpr(std::vector<double>{0.9, 0.8, 0.2, 0.1}, V{1, 1, 0, 0}) == 1.0);
  CHECK(tnr_at_tpr(std::vector<double>{0.5, 0.5, 0.5, 0.5}, V{1, 1, 0, 0}) == 0.0);
  CHECK_THROWS_AS(tnr_at_tpr(std::vector<double>{0.1, 0.2}, V{0, 0}), UndefinedTPR);
  CHECK_THROWS_AS(tnr_at_tpr(std::vector<double>{0.1, 0.2}, V{1, 1}), UndefinedTPR);
}

TEST_CASE("tnr at tpr matches an exhaustive threshold sweep") {
  std::mt19937_64 rng(75);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 10 + trial * 3;
    std::vector<double> scores;
    V labels;
    for (int i = 0; i < n; ++i) {
      const int label = i % 3 == 0 ? 0 : 1;
      double s = normal(rng) + (label ? 1.0 : 0.0);
      if (trial % 4 == 0) s = std::round(s * 4) / 4;  // heavy ties
      scores.push_back(s);
      labels.push_back(label);
    }
    for (double target : {0.5, 0.8, 0.95, 1.0}) {
      CHECK(tnr_at_tpr(scores, labels, target) == testing::reference_tnr_at_tpr(scores, labels, target));
    }
    double prev = 2.0;
    for (double target : {0.1, 0.3, 0.6, 0.9, 0.95, 0.99, 1.0}) {
      const double tnr = tnr_at_tpr(scores, labels, target);
      CHECK(tnr <= prev);
      prev = tnr;
    }
  }
}

TEST_CASE("evaluation report") {
  Eigen::MatrixXd probs(5, 5);
  probs.setConstant(0.05);
  for (int i = 0; i < 5; ++i) probs(i, i) = 0.8;
  const V truths{0, 1, 2, 3, 4};
  const auto report = evaluate(probs, truths, parse_splits("0:1-4,0-1:2-4,0-2:3-4", 5));
  CHECK(report.accuracy == 1.0);
  CHECK(report.mae == 0.0);
  CHECK(report.qwk == 1.0);
  CHECK(report.tnr_at_tpr.size() == 3);
  CHECK(report.mean_tnr == 1.0);
}
