#include <random>

#include "doctest.h"
#include "ordot/error.hpp"
#include "ordot/histogram.hpp"
#include "support/test_support.hpp"

using namespace ordot;

TEST_CASE("make_histogram strict and renormalize") {
  const auto a = make_histogram(std::vector<double>{0.5, 0.5}, Normalization::kStrict);
  CHECK(a.vector() == std::vector<double>{0.5, 0.5});

  const auto b = make_histogram(std::vector<double>{2.0, 2.0}, Normalization::kRenormalize);
  CHECK(b.vector() == std::vector<double>{0.5, 0.5});

  CHECK_THROWS_AS(make_histogram(std::vector<double>{0.3, -0.1}, Normalization::kStrict), InvalidMass);
  CHECK_THROWS_AS(make_histogram(std::vector<double>{0.3, 0.3}, Normalization::kStrict), InvalidMass);
  CHECK_THROWS_AS(make_histogram(std::vector<double>{0.0, 0.0}, Normalization::kRenormalize), DegenerateHistogram);
  CHECK_THROWS_AS(make_histogram(std::vector<double>{NAN, 1.0}, Normalization::kRenormalize), InvalidMass);
  CHECK_THROWS_AS(make_histogram(std::vector<double>{1.0}, Normalization::kRenormalize), ShapeError);
}

TEST_CASE("strict mode accepts mass within 1e-9") {
  CHECK_NOTHROW(make_histogram(std::vector<double>{0.5, 0.5 + 5e-10}, Normalization::kStrict));
  CHECK_THROWS_AS(make_histogram(std::vector<double>{0.5, 0.5 + 5e-9}, Normalization::kStrict), InvalidMass);
}

TEST_CASE("one_hot") {
  CHECK(one_hot(2, 5).vector() == std::vector<double>{0, 0, 1, 0, 0});
  CHECK(one_hot(0, 2).vector() == std::vector<double>{1, 0});
  CHECK_THROWS_AS(one_hot(5, 5), InvalidClass);
  CHECK_THROWS_AS(one_hot(-1, 5), InvalidClass);
  CHECK_THROWS_AS(OneHotLabel(3, 3), InvalidClass);

  for (int n = 2; n <= 12; ++n) {
    for (int j = 0; j < n; ++j) {
      const auto h = one_hot(j, n);
      CHECK(h.argmax() == j);
      double total = 0.0;
      for (double v : h.values()) total += v;
      CHECK(total == 1.0);
    }
  }
}

TEST_CASE("cumulative") {
  CHECK(cumulative(make_histogram(std::vector<double>{0.5, 0.5}, Normalization::kStrict)) ==
        std::vector<double>{0.5, 1.0});
  CHECK(cumulative(one_hot(0, 3)) == std::vector<double>{1, 1, 1});

  // Hand prefix sums: 0.1, 0.1+0.2, 0.3+0.4, 0.7+0.2, 0.9+0.1.
  const auto c = cumulative(make_histogram(std::vector<double>{0.1, 0.2, 0.4, 0.2, 0.1}, Normalization::kStrict));
  const std::vector<double> expected{0.1, 0.3, 0.7, 0.9, 1.0};
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(expected[i]).epsilon(1e-15));
}

TEST_CASE("histogram invariants on random draws") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 15;
    const auto h = testing::random_histogram(rng, n, 0.3);
    double total = 0.0;
    for (double v : h.values()) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(std::abs(total - 1.0) <= kMassTolerance);
    const auto c = cumulative(h);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] >= c[i - 1]);
    CHECK(std::abs(c.back() - 1.0) <= kMassTolerance);
  }
}
