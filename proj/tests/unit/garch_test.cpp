#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "abm/stats/descriptive.hpp"
#include "abm/stats/garch.hpp"
#include "oracles.hpp"

using namespace abm::stats;

TEST(Garch, RecoversParameters) {
  abm::Rng rng(51);
  const auto x = oracle::garch11(rng, 10000, 0.1, 0.1, 0.8);
  const auto fit = garch_filter(x);
  EXPECT_TRUE(fit.converged) << fit.diagnostics;
  EXPECT_NEAR(fit.omega, 0.1, 0.1);
  EXPECT_NEAR(fit.alpha, 0.1, 0.1);
  EXPECT_NEAR(fit.beta, 0.8, 0.1);
  EXPECT_FALSE(fit.nu);
  ASSERT_EQ(fit.z.size(), x.size());
  ASSERT_EQ(fit.sigma.size(), x.size());
  for (std::size_t t = 0; t < x.size(); t += 997) {
    EXPECT_NEAR(fit.z[t], (x[t] - fit.mean) / fit.sigma[t], 1e-12);
  }
}

TEST(Garch, RecursionMatchesReportedSigma) {
  abm::Rng rng(52);
  const auto x = oracle::garch11(rng, 3000, 0.05, 0.15, 0.75);
  const auto fit = garch_filter(x);
  for (std::size_t t = 1; t < x.size(); ++t) {
    const double e = x[t - 1] - fit.mean;
    const double s2 = fit.omega + fit.alpha * e * e + fit.beta * fit.sigma[t - 1] * fit.sigma[t - 1];
    ASSERT_NEAR(fit.sigma[t] * fit.sigma[t], s2, 1e-9 * s2);
  }
}

TEST(Garch, WhiteNoiseHasLittleDynamics) {
  abm::Rng rng(53);
  const auto x = oracle::normals(rng, 5000, 0.02);
  const auto fit = garch_filter(x);
  EXPECT_LT(fit.alpha, 0.05);
  const auto m = moments(x);
  // With no dynamics the residuals are the standardised input.
  double worst = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) worst = std::max(worst, std::abs(fit.z[t] - (x[t] - m.mean) / m.std));
  EXPECT_LT(worst, 0.35);
}

TEST(Garch, StudentInnovations) {
  std::mt19937_64 gen(54);
  std::student_t_distribution<double> td(5.0);
  const double scale = std::sqrt(3.0 / 5.0);
  std::vector<double> x;
  double var = 1.0, prev = 0.0;
  for (int t = 0; t < 11000; ++t) {
    var = 0.1 + 0.1 * prev * prev + 0.8 * var;
    prev = std::sqrt(var) * scale * td(gen);
    if (t >= 1000) x.push_back(prev);
  }
  const auto fit = garch_filter(x, Innovation::student_t);
  ASSERT_TRUE(fit.nu);
  EXPECT_NEAR(*fit.nu, 5.0, 1.5);
  EXPECT_NEAR(fit.alpha, 0.1, 0.1);
  EXPECT_NEAR(fit.beta, 0.8, 0.1);
  EXPECT_GT(*moments(fit.z).kurtosis, 3.0);
}

TEST(Garch, Deterministic) {
  abm::Rng rng(55);
  const auto x = oracle::garch11(rng, 2000, 0.1, 0.1, 0.8);
  const auto a = garch_filter(x);
  const auto b = garch_filter(x);
  EXPECT_EQ(a.omega, b.omega);
  EXPECT_EQ(a.z, b.z);
}

TEST(Garch, RejectsTinyInput) {
  EXPECT_THROW((void)garch_filter(std::vector<double>{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW((void)garch_filter(std::vector<double>(100, 0.5)), std::invalid_argument);
}
