#include "chainstab/errors.hpp"
#include "chainstab/signed_algebra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace chainstab;

TEST(SignedPower, Examples) {
  EXPECT_NEAR(signed_power(-8.0, 1.0 / 3.0), -2.0, 1e-15);
  EXPECT_EQ(signed_power(0.0, 0.7), 0.0);
  EXPECT_NEAR(signed_power(4.0, 1.5), 8.0, 1e-14);
}

TEST(SignedPower, RejectsBadArguments) {
  EXPECT_THROW(signed_power(1.0, 0.0), DomainError);
  EXPECT_THROW(signed_power(1.0, -0.5), DomainError);
  EXPECT_THROW(signed_power(std::numeric_limits<double>::quiet_NaN(), 1.0), DomainError);
  EXPECT_THROW(signed_power(std::numeric_limits<double>::infinity(), 1.0), DomainError);
}

TEST(SignedPower, OddAndHomogeneous) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a_dist(-50.0, 50.0);
  std::uniform_real_distribution<double> theta_dist(0.05, 3.0);
  std::uniform_real_distribution<double> lambda_dist(0.1, 10.0);
  for (int n = 0; n < 10000; ++n) {
    const double a = a_dist(rng);
    const double theta = theta_dist(rng);
    const double lambda = lambda_dist(rng);
    EXPECT_EQ(signed_power(-a, theta), -signed_power(a, theta));
    const double lhs = signed_power(lambda * a, theta);
    const double rhs = std::pow(lambda, theta) * signed_power(a, theta);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
  }
}

TEST(Sign, Examples) {
  EXPECT_EQ(sign(-0.3), -1);
  EXPECT_EQ(sign(0.0), 0);
  EXPECT_EQ(sign(7.0), 1);
}

TEST(Saturate, Examples) {
  EXPECT_EQ(saturate(0.5), 0.5);
  EXPECT_EQ(saturate(3.0), 1.0);
  EXPECT_EQ(saturate(-2.0), -1.0);
}

TEST(NuEpsilon, Examples) {
  EXPECT_DOUBLE_EQ(nu_epsilon(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(nu_epsilon(0.25, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(nu_epsilon(0.75, 1.0), 0.5);
  EXPECT_THROW(nu_epsilon(0.5, 0.0), DomainError);
}

TEST(NuEpsilon, RampIsMonotoneAndBounded) {
  double previous = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double a = 0.01 * i;
    const double value = nu_epsilon(a, 2.0);
    EXPECT_GE(value, previous);
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, 1.0);
    previous = value;
  }
}

TEST(Dilate, Examples) {
  const auto weights = DilationWeights::for_chain(2, -0.1);
  const std::vector<double> z{1.0, 1.0};
  EXPECT_EQ(dilate(z, 1.0, weights), z);
  const auto scaled = dilate(z, 2.0, weights);
  EXPECT_DOUBLE_EQ(scaled[0], 2.0);
  EXPECT_NEAR(scaled[1], 1.86607, 1e-5);
  EXPECT_DOUBLE_EQ(scaled[1], std::pow(2.0, 0.9));
}

TEST(Dilate, LengthMismatch) {
  const auto weights = DilationWeights::for_chain(3, -0.1);
  const std::vector<double> z{1.0, 1.0};
  EXPECT_THROW(dilate(z, 2.0, weights), DomainError);
}

TEST(Dilate, GroupLaw) {
  const auto weights = DilationWeights::for_chain(4, -0.07);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> lambda_dist(0.1, 10.0);
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> z(4);
    for (auto& x : z) x = normal(rng);
    const double a = lambda_dist(rng);
    const double b = lambda_dist(rng);
    const auto composed = dilate(dilate(z, b, weights), a, weights);
    const auto direct = dilate(z, a * b, weights);
    for (std::size_t i = 0; i < z.size(); ++i) {
      EXPECT_NEAR(composed[i], direct[i], 1e-12 * std::abs(direct[i]) + 1e-300);
    }
  }
}

TEST(DilationWeights, Validation) {
  EXPECT_NO_THROW(DilationWeights({1.0, 0.9, 0.8}, -0.1));
  EXPECT_THROW(DilationWeights({1.0, 0.8}, -0.1), DomainError);
  EXPECT_THROW(DilationWeights::for_chain(2, -1.0), DomainError);
}
