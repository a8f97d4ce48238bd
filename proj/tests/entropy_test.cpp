#include "canbound/entropy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

namespace canbound {
namespace {

// Reference values computed with mpmath at 30 digits.
constexpr double kH13 = 0.918295834054489514787;
constexpr double kG12 = -1.38629436111989061883;

TEST(BinaryEntropy, KnownValues) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(binary_entropy(1.0 / 3.0), kH13, 1e-15);
}

TEST(BinaryEntropy, RejectsOutsideUnitInterval) {
  EXPECT_THROW(binary_entropy(-1e-12), std::domain_error);
  EXPECT_THROW(binary_entropy(1.0 + 1e-12), std::domain_error);
  EXPECT_THROW(binary_entropy(std::nan("")), std::domain_error);
}

TEST(BinaryEntropy, SymmetricAboutOneHalf) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng);
    EXPECT_NEAR(binary_entropy(p), binary_entropy(1.0 - p), 1e-14);
  }
}

TEST(PairObjective, Examples) {
  EXPECT_EQ(pair_objective(ProbPair(0.7, 0.0)), 0.0);
  EXPECT_EQ(pair_objective(ProbPair(0.0, 0.3)), 0.0);
  EXPECT_DOUBLE_EQ(pair_objective(ProbPair(0.5, 0.5)), 1.0);
  EXPECT_NEAR(pair_objective(ProbPair(1.0 / 3.0, 2.0 / 3.0)), kH13, 1e-15);
}

TEST(PairObjective, SymmetryAndRange) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ProbPair pq(u(rng), u(rng));
    const double f = pair_objective(pq);
    EXPECT_DOUBLE_EQ(f, pair_objective(pq.swapped()));
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 2.0 * std::max(pq.p(), pq.q()) + 1e-15);
  }
}

TEST(ProbPair, RejectsOutOfRange) {
  EXPECT_THROW(ProbPair(1.5, 0.5), std::domain_error);
  EXPECT_THROW(ProbPair(0.5, -0.1), std::domain_error);
}

TEST(LogRatio, Values) {
  EXPECT_NEAR(log_ratio(0.5), kG12, 1e-15);
  EXPECT_NEAR(log_ratio(1e-8), -1.0, 1e-6);
  EXPECT_GT(log_ratio(0.3), log_ratio(0.7));
}

TEST(LogRatio, EndpointsAreErrors) {
  EXPECT_THROW(log_ratio(0.0), std::domain_error);
  EXPECT_THROW(log_ratio(1.0), std::domain_error);
  EXPECT_THROW(log_ratio(-0.5), std::domain_error);
}

TEST(LogRatio, StrictlyDecreasing) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng);
    double b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    EXPECT_GT(log_ratio(a), log_ratio(b)) << a << " " << b;
  }
}

TEST(KappaFor, ReferenceValue) {
  // mpmath: kappa(0.45, 0.888889) = 1.50334884124...
  EXPECT_NEAR(kappa_for(0.45, 0.888889), 1.50334884124389, 1e-12);
}

TEST(KappaFor, DegenerateAndSymmetric) {
  EXPECT_THROW(kappa_for(0.4, 0.4), std::invalid_argument);
  EXPECT_DOUBLE_EQ(kappa_for(0.3, 0.8), kappa_for(0.8, 0.3));
}

TEST(KappaFor, PositiveOnSamples) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-4, 1.0 - 1e-4);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng);
    double b = u(rng);
    if (a == b) continue;
    EXPECT_GT(kappa_for(std::min(a, b), std::max(a, b)), 0.0);
  }
}

TEST(Lagrangian, Examples) {
  EXPECT_EQ(lagrangian(ProbPair(0.0, 0.0), 3.0), 0.0);
  EXPECT_DOUBLE_EQ(lagrangian(ProbPair(0.5, 0.5), 1.0), 2.0);
  const ProbPair pq(1.0 / 3.0, 2.0 / 3.0);
  EXPECT_EQ(lagrangian(pq, 0.0), pair_objective(pq));
  EXPECT_THROW(lagrangian(pq, -1.0), std::domain_error);
}

}  // namespace
}  // namespace canbound
