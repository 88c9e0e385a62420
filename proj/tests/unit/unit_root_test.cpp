#include <gtest/gtest.h>

#include <cmath>

#include "abm/stats/unit_root.hpp"
#include "oracles.hpp"

using namespace abm::stats;

namespace {

// Dickey-Fuller t statistic of dy_t = rho y_{t-1} + e_t, no deterministic terms.
double df_t(const std::vector<double>& y) {
  double sxy = 0, sxx = 0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    sxy += y[t - 1] * (y[t] - y[t - 1]);
    sxx += y[t - 1] * y[t - 1];
  }
  const double rho = sxy / sxx;
  double rss = 0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    const double e = y[t] - y[t - 1] - rho * y[t - 1];
    rss += e * e;
  }
  const double n = static_cast<double>(y.size() - 1);
  return rho / std::sqrt(rss / (n - 1.0) / sxx);
}

// Level-stationarity KPSS statistic with no autocovariance lags.
double kpss_level(const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  double m = 0;
  for (double v : y) m += v;
  m /= n;
  double s = 0, num = 0, rss = 0;
  for (double v : y) {
    s += v - m;
    num += s * s;
    rss += (v - m) * (v - m);
  }
  return num / (n * n) / (rss / n);
}

}  // namespace

TEST(UnitRoot, CriticalValues) {
  EXPECT_NEAR(df_critical_value(Deterministic::none, 0.05, 502), -1.941, 1e-3);
  EXPECT_NEAR(df_critical_value(Deterministic::none, 0.01, 502), -2.5702, 1e-3);
  EXPECT_NEAR(df_critical_value(Deterministic::none, 0.10, 502), -1.6163, 1e-3);
  EXPECT_LT(df_critical_value(Deterministic::constant, 0.05, 502), df_critical_value(Deterministic::none, 0.05, 502));
  EXPECT_LT(df_critical_value(Deterministic::trend, 0.05, 502), df_critical_value(Deterministic::constant, 0.05, 502));
}

TEST(UnitRoot, PValueInvertsCriticalValue) {
  for (auto det : {Deterministic::none, Deterministic::constant, Deterministic::trend}) {
    for (double n : {60.0, 502.0, 3000.0}) {
      bool clipped = true;
      EXPECT_NEAR(df_p_value(det, df_critical_value(det, 0.05, n), n, &clipped), 0.05, 2e-3);
      EXPECT_FALSE(clipped);
      EXPECT_DOUBLE_EQ(df_p_value(det, -30.0, n, &clipped), 0.001);
      EXPECT_TRUE(clipped);
      EXPECT_DOUBLE_EQ(df_p_value(det, 5.0, n), 0.999);
    }
  }
}

TEST(UnitRoot, AdfMatchesClosedForm) {
  abm::Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = trial % 2 ? oracle::random_walk(rng, 300) : oracle::normals(rng, 300);
    const auto a = adf_test(y);
    EXPECT_NEAR(a.statistic, df_t(y), 1e-9 * std::max(1.0, std::abs(a.statistic)));
    EXPECT_EQ(a.nobs, 299u);
    // With no autocovariance lags the PP correction vanishes.
    EXPECT_NEAR(pp_test(y).statistic, a.statistic, 1e-9 * std::max(1.0, std::abs(a.statistic)));
  }
}

TEST(UnitRoot, KpssMatchesClosedForm) {
  abm::Rng rng(72);
  const auto y = oracle::normals(rng, 400);
  EXPECT_NEAR(kpss_test(y, false).statistic, kpss_level(y), 1e-10);
  const auto k = kpss_test(y, true);
  EXPECT_NEAR(k.critical_value, 0.146, 1e-12);
  EXPECT_NEAR(kpss_test(y, false).critical_value, 0.463, 1e-12);
}

TEST(UnitRoot, KpssPValueBounds) {
  abm::Rng rng(73);
  const auto noise = oracle::normals(rng, 500);
  const auto k = kpss_test(noise);
  EXPECT_FALSE(k.reject);
  EXPECT_LE(k.p_value, 0.1);
  EXPECT_GE(k.p_value, 0.01);
  const auto walk = kpss_test(oracle::random_walk(rng, 500));
  EXPECT_TRUE(walk.reject);
  EXPECT_DOUBLE_EQ(walk.p_value, 0.01);
  EXPECT_TRUE(walk.p_clipped);
}

TEST(UnitRoot, WhiteNoiseVersusWalk) {
  abm::Rng rng(74);
  const auto x = oracle::normals(rng, 500);
  const auto pp = pp_test(x);
  EXPECT_TRUE(pp.reject);
  EXPECT_DOUBLE_EQ(pp.p_value, 0.001);
  EXPECT_TRUE(adf_test(x).reject);
  const auto w = oracle::random_walk(rng, 500);
  EXPECT_FALSE(pp_test(w).reject);
  EXPECT_FALSE(adf_test(w).reject);
}

TEST(UnitRoot, LagsAndVariants) {
  abm::Rng rng(75);
  const auto x = oracle::normals(rng, 600);
  const auto a = adf_test(x, Deterministic::constant, 3);
  EXPECT_EQ(a.lags, 3);
  EXPECT_EQ(a.nobs, 596u);
  EXPECT_TRUE(a.reject);
  EXPECT_TRUE(pp_test(x, Deterministic::trend, 5).reject);
  EXPECT_EQ(kpss_test(x, true, 4).lags, 4);
}

TEST(UnitRoot, KpssSizeNearNominal) {
  abm::Rng rng(76);
  for (bool trend : {false, true}) {
    int rejected = 0;
    const int trials = 400;
    for (int i = 0; i < trials; ++i) rejected += kpss_test(oracle::normals(rng, 600), trend, 4).reject;
    EXPECT_GT(rejected, trials / 100) << trend;
    EXPECT_LT(rejected, trials / 10) << trend;
  }
}

TEST(UnitRoot, Errors) {
  EXPECT_THROW((void)adf_test(std::vector<double>(20, 1.0)), std::invalid_argument);
  EXPECT_THROW((void)kpss_test(std::vector<double>(100, 1.0)), std::invalid_argument);
  EXPECT_THROW((void)adf_test(std::vector<double>(100, 1.0)), std::invalid_argument);
  EXPECT_THROW((void)pp_test(std::vector<double>(100, 0.5), Deterministic::none, -1), std::invalid_argument);
}
