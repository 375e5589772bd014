// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "../oracles.hpp"
#include "mlcert/errors.hpp"
#include "mlcert/numerics.hpp"

namespace mlcert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(GaussianCdf, ReferenceValues) {
  EXPECT_EQ(gaussian_cdf(0.0), 0.5);
  EXPECT_EQ(gaussian_cdf(kInf), 1.0);
  EXPECT_EQ(gaussian_cdf(-kInf), 0.0);
  // erf series oracle: 0.97500000090355...
  EXPECT_NEAR(oracle::phi(1.959964), 0.975000000903558, 1e-14);
  EXPECT_NEAR(gaussian_cdf(1.959964), 0.975000, 1e-6);
  EXPECT_NEAR(gaussian_cdf(1.959964), oracle::phi(1.959964), 1e-12);
}

TEST(GaussianCdf, MatchesSeriesOracle) {
  for (double z = -6.0; z <= 6.0; z += 0.0625) {
    EXPECT_NEAR(gaussian_cdf(z), oracle::phi(z), 1e-12) << "z=" << z;
  }
}

TEST(GaussianCdf, NanIsDomainError) { EXPECT_THROW(gaussian_cdf(std::nan("")), DomainError); }

TEST(GaussianQuantile, ReferenceValues) {
  EXPECT_EQ(gaussian_quantile(0.5), 0.0);
  EXPECT_EQ(gaussian_quantile(0.0), -kInf);
  EXPECT_EQ(gaussian_quantile(1.0), kInf);
  const double oracle_value = oracle::phi_inverse(0.975);
  EXPECT_NEAR(oracle_value, 1.959963984540054, 1e-12);
  EXPECT_NEAR(gaussian_quantile(0.975), 1.959964, 1e-6);
  EXPECT_NEAR(gaussian_quantile(0.975), oracle_value, 1e-12);
  EXPECT_NEAR(gaussian_quantile(0.8), 0.841621233572914, 1e-12);
}

TEST(GaussianQuantile, OutOfRangeIsDomainError) {
  EXPECT_THROW(gaussian_quantile(-1e-12), DomainError);
  EXPECT_THROW(gaussian_quantile(1.0 + 1e-12), DomainError);
  EXPECT_THROW(gaussian_quantile(std::nan("")), DomainError);
}

TEST(GaussianQuantile, InfinitiesPropagateThroughShifts) {
  EXPECT_EQ(gaussian_cdf(gaussian_quantile(0.0) - 3.0), 0.0);
  EXPECT_EQ(gaussian_cdf(gaussian_quantile(0.0) + 3.0), 0.0);
  EXPECT_EQ(gaussian_cdf(gaussian_quantile(1.0) + 3.0), 1.0);
  EXPECT_EQ(gaussian_cdf(gaussian_quantile(1.0) - 3.0), 1.0);
}

TEST(GaussianQuantile, RoundTripProperty) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> log_tail(std::log(1e-12), std::log(0.5));
  for (int i = 0; i < 20000; ++i) {
    double p = std::exp(log_tail(gen));
    if (i % 2) p = 1.0 - p;
    EXPECT_LE(std::fabs(gaussian_cdf(gaussian_quantile(p)) - p), 1e-10) << "p=" << p;
  }
}

TEST(IncompleteBeta, ReferenceValues) {
  EXPECT_NEAR(regularized_incomplete_beta(0.5, 1, 1), 0.5, 1e-15);
  EXPECT_EQ(regularized_incomplete_beta(1.0, 3, 8), 1.0);
  EXPECT_EQ(regularized_incomplete_beta(0.0, 3, 8), 0.0);
  const double quad = oracle::incomplete_beta(0.2, 3, 8);
  EXPECT_NEAR(quad, 0.3222004736, 1e-12);  // polynomial closed form
  EXPECT_NEAR(regularized_incomplete_beta(0.2, 3, 8), quad, 1e-8);
}

TEST(IncompleteBeta, RelativeAccuracyAgainstQuadrature) {
  // Integer shapes keep the quadrature integrand a smooth polynomial.
  const double shapes[][2] = {{2, 7}, {3, 8}, {20, 4}, {50, 951}, {900, 101}};
  for (const auto& s : shapes) {
    for (double x : {0.01, 0.05, 0.2, 0.5, 0.8, 0.88, 0.95}) {
      const double want = oracle::incomplete_beta(x, s[0], s[1]);
      if (want < 1e-250) continue;
      const double got = regularized_incomplete_beta(x, s[0], s[1]);
      EXPECT_LE(std::fabs(got - want), 1e-10 * want + 1e-14) << "x=" << x << " a=" << s[0] << " b=" << s[1];
    }
  }
}

TEST(IncompleteBeta, NonIntegerShapes) {
  // 30-digit reference values (mpmath betainc).
  EXPECT_NEAR(regularized_incomplete_beta(0.01, 1.5, 7.0), 0.0141445439572011752, 1e-12);
  EXPECT_NEAR(regularized_incomplete_beta(0.05, 1.5, 7.0), 0.136931621731254700, 1e-11);
}

TEST(IncompleteBeta, BadShapesAreDomainErrors) {
  EXPECT_THROW(regularized_incomplete_beta(0.5, 0.0, 1.0), DomainError);
  EXPECT_THROW(regularized_incomplete_beta(0.5, 1.0, -2.0), DomainError);
  EXPECT_THROW(regularized_incomplete_beta(1.5, 1.0, 1.0), DomainError);
}

TEST(BetaQuantile, ReferenceValues) {
  EXPECT_NEAR(beta_quantile(0.5, 1, 1), 0.5, 1e-12);
  EXPECT_EQ(beta_quantile(0.0, 3, 8), 0.0);
  EXPECT_EQ(beta_quantile(1.0, 3, 8), 1.0);
  const double quad_root = oracle::beta_quantile(0.05, 3, 8);
  EXPECT_NEAR(quad_root, 0.0872644339141503, 1e-10);
  EXPECT_NEAR(beta_quantile(0.05, 3, 8), quad_root, 1e-8);
}

TEST(BetaQuantile, Duality) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> shape(0.5, 400.0);
  std::uniform_real_distribution<double> logq(std::log(1e-6), std::log(0.5));
  for (int i = 0; i < 3000; ++i) {
    const double a = shape(gen);
    const double b = shape(gen);
    double q = std::exp(logq(gen));
    if (i % 2) q = 1.0 - q;
    const double x = beta_quantile(q, a, b);
    EXPECT_LE(std::fabs(regularized_incomplete_beta(x, a, b) - q), 1e-8) << "q=" << q << " a=" << a << " b=" << b;
  }
}

TEST(Numerics, MonotoneUnderRandomSweeps) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> shape(0.5, 200.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(200);
    for (double& x : xs) x = unit(gen);
    std::sort(xs.begin(), xs.end());
    const double a = shape(gen);
    const double b = shape(gen);
    double prev_i = 0.0, prev_q = 0.0, prev_c = 0.0;
    for (double x : xs) {
      const double i = regularized_incomplete_beta(x, a, b);
      const double q = beta_quantile(x, a, b);
      const double c = gaussian_cdf(12.0 * x - 6.0);
      EXPECT_GE(i, prev_i);
      EXPECT_GE(q, prev_q);
      EXPECT_GE(c, prev_c);
      prev_i = i;
      prev_q = q;
      prev_c = c;
    }
  }
}

}  // namespace
}  // namespace mlcert
