#include <gtest/gtest.h>

#include <cmath>

#include "pukit/platt.hpp"
#include "test_support.hpp"

namespace pukit {
namespace {

TEST(Platt, SymmetricScoresGiveZeroOffset) {
  for (const std::size_t n : {2u, 10u, 250u}) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
      scores.push_back(1.0);
      labels.push_back(1);
      scores.push_back(-1.0);
      labels.push_back(-1);
    }
    const PlattParams p = platt_fit(scores, labels);
    EXPECT_NEAR(p.B, 0.0, 1e-6);
    // The fitted sigmoid reproduces the smoothed targets exactly.
    EXPECT_NEAR(p.A, -std::log(static_cast<double>(n) + 1.0), 1e-5);
    EXPECT_LT(p.A, 0.0);
  }
}

TEST(Platt, UninformativeScoresRecoverPrior) {
  Rng rng(31);
  std::vector<double> scores;
  std::vector<int> labels;
  std::size_t n_pos = 0;
  for (int i = 0; i < 4000; ++i) {
    scores.push_back(rng.normal());
    const int y = rng.uniform01() < 0.3 ? 1 : -1;
    n_pos += (y == 1);
    labels.push_back(y);
  }
  const PlattParams p = platt_fit(scores, labels);
  EXPECT_LT(std::abs(p.A), 0.1);
  const double prior = static_cast<double>(n_pos) / 4000.0;
  for (const double s : {-1.0, 0.0, 1.0}) EXPECT_NEAR(platt_probability(p, s), prior, 0.03);
}

TEST(Platt, ProbabilityIncreasesWithScore) {
  const auto g = testing::make_gaussian_pu(200, 1.0, 1.0, 6);
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t i = 0; i < g.x.rows(); ++i) {
    scores.push_back(g.x(i, 0));
    labels.push_back(g.y[i] ? 1 : -1);
  }
  const PlattParams p = platt_fit(scores, labels);
  ASSERT_LT(p.A, 0.0);
  double prev = -1.0;
  for (double s = -5.0; s <= 5.0; s += 0.25) {
    const double prob = platt_probability(p, s);
    EXPECT_GT(prob, prev);
    prev = prob;
  }
}

TEST(Platt, ProbabilityStableAtExtremes) {
  const PlattParams p{-50.0, 0.0};
  EXPECT_EQ(platt_probability(p, 1e6), 1.0);
  EXPECT_EQ(platt_probability(p, -1e6), 0.0);
  EXPECT_DOUBLE_EQ(platt_probability(p, 0.0), 0.5);
}

TEST(Platt, GradientMatchesCentralDifferences) {
  const auto g = testing::make_gaussian_pu(150, 0.6, 1.2, 12);
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t i = 0; i < g.x.rows(); ++i) {
    scores.push_back(g.x(i, 0) - 0.3 * g.x(i, 1));
    labels.push_back(g.s[i] ? 1 : -1);
  }
  const PlattObjective f(scores, labels);
  Rng rng(77);
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const double A = -3.0 + 4.0 * rng.uniform01();
    const double B = -2.0 + 4.0 * rng.uniform01();
    const auto grad = f.gradient(A, B);
    const double fdA = (f.value(A + h, B) - f.value(A - h, B)) / (2 * h);
    const double fdB = (f.value(A, B + h) - f.value(A, B - h)) / (2 * h);
    const double num = std::hypot(grad[0] - fdA, grad[1] - fdB);
    const double den = std::max(std::hypot(grad[0], grad[1]), std::hypot(fdA, fdB));
    EXPECT_LT(num / den, 1e-5) << "A=" << A << " B=" << B;
  }
}

TEST(Platt, InputErrors) {
  const std::vector<double> three = {1, 2, 3};
  const std::vector<int> l3 = {1, -1, 1};
  EXPECT_THROW(platt_fit(three, l3), Error);
  const std::vector<double> four = {1, 2, 3, 4};
  const std::vector<int> same = {1, 1, 1, 1};
  EXPECT_THROW(platt_fit(four, same), Error);
  const std::vector<double> with_nan = {1, NAN, 3, 4};
  const std::vector<int> mixed = {1, -1, 1, -1};
  EXPECT_THROW(platt_fit(with_nan, mixed), Error);
}

}  // namespace
}  // namespace pukit
