#include <gtest/gtest.h>

#include <cmath>

#include "abm/stats/power_law.hpp"
#include "oracles.hpp"

using namespace abm::stats;

TEST(PowerLawMle, ClosedForm) {
  const double e = std::exp(1.0);
  EXPECT_DOUBLE_EQ(power_law_mle(std::vector<double>{e, e, e, e}, 1.0), 2.0);
  // Points below xmin are ignored.
  EXPECT_DOUBLE_EQ(power_law_mle(std::vector<double>{0.5, e, e, e, e}, 1.0), 2.0);
  EXPECT_THROW((void)power_law_mle(std::vector<double>{1, 1}, 1.0), std::invalid_argument);
  EXPECT_THROW((void)power_law_mle(std::vector<double>{2, 3}, 0.0), std::invalid_argument);
}

TEST(PowerLawFit, RecoversExponent) {
  abm::Rng rng(61);
  const auto x = oracle::power_law(rng, 10000, 2.5);
  PowerLawOptions o;
  o.bootstrap_reps = 30;
  const auto fit = fit_power_law(x, o);
  EXPECT_NEAR(fit.zeta, 2.5, 0.1);
  EXPECT_LT(fit.xmin, 2.0);
  EXPECT_GE(fit.n_tail, 50u);
  EXPECT_GT(fit.zeta_se, 0.0);
  EXPECT_LT(fit.zeta_se, 0.2);
  EXPECT_EQ(fit.n, 10000u);
}

TEST(PowerLawFit, FindsXminAboveBody) {
  // Uniform body on [0.1, 5) under a power-law tail from 5.
  abm::Rng rng(62);
  std::vector<double> x = oracle::power_law(rng, 3000, 3.0, 5.0);
  for (int i = 0; i < 3000; ++i) x.push_back(0.1 + 4.9 * rng.uniform());
  PowerLawOptions o;
  o.bootstrap_reps = 0;
  o.max_candidates = 400;
  const auto fit = fit_power_law(x, o);
  EXPECT_NEAR(fit.xmin, 5.0, 0.6);
  EXPECT_NEAR(fit.zeta, 3.0, 0.2);
}

TEST(PowerLawFit, JointRescalingInvariance) {
  abm::Rng rng(63);
  const auto x = oracle::power_law(rng, 2000, 2.2, 3.0);
  for (double c : {0.001, 0.5, 7.0, 1e4}) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
    EXPECT_NEAR(power_law_mle(y, 3.0 * c), power_law_mle(x, 3.0), 1e-9);
  }
  PowerLawOptions o;
  o.bootstrap_reps = 0;
  const auto a = fit_power_law(x, o);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 8.0 * x[i];
  const auto b = fit_power_law(y, o);
  EXPECT_NEAR(b.zeta, a.zeta, 1e-9);
  EXPECT_NEAR(b.xmin, 8.0 * a.xmin, 1e-9 * b.xmin);
}

TEST(PowerLawFit, Errors) {
  std::vector<double> few(40, 1.0);
  EXPECT_THROW((void)fit_power_law(few), std::invalid_argument);
  std::vector<double> neg(100, 1.0);
  neg[3] = -1.0;
  EXPECT_THROW((void)fit_power_law(neg), std::invalid_argument);
}

TEST(PowerLawGof, AcceptsOwnModelRejectsExponential) {
  abm::Rng rng(64);
  PowerLawOptions o;
  o.bootstrap_reps = 0;
  const auto x = oracle::power_law(rng, 2000, 2.5);
  const auto fit = fit_power_law(x, o);
  const auto g = power_law_gof(x, fit, 200, o);
  EXPECT_GE(g.p_value, 0.05);
  EXPECT_EQ(g.n_synth, 200);
  EXPECT_FALSE(g.few_sets);

  // With a short tail an exponential is locally indistinguishable from a
  // power law, so force the fit to cover most of the sample.
  o.min_tail = 1000;
  std::vector<double> ex(2000);
  for (auto& v : ex) v = -std::log(1.0 - rng.uniform());
  const auto efit = fit_power_law(ex, o);
  EXPECT_LT(power_law_gof(ex, efit, 200, o).p_value, 0.05);
}

TEST(PowerLawGof, LognormalRejected) {
  abm::Rng rng(65);
  std::vector<double> x(5000);
  for (auto& v : x) v = std::exp(0.5 * abm::standard_normal(rng));
  PowerLawOptions o;
  o.bootstrap_reps = 0;
  o.min_tail = 2000;
  const auto fit = fit_power_law(x, o);
  EXPECT_LT(power_law_gof(x, fit, 200, o).p_value, 0.05);
}

TEST(PowerLawGof, CoverageOnOwnModel) {
  // p-values of data from a power law are roughly uniform, so p >= 0.05 in
  // about 95% of trials.
  abm::Rng rng(66);
  PowerLawOptions o;
  o.bootstrap_reps = 0;
  o.max_candidates = 30;
  int kept = 0;
  const int trials = 40;
  for (int i = 0; i < trials; ++i) {
    const auto x = oracle::power_law(rng, 500, 2.5);
    const auto fit = fit_power_law(x, o);
    o.seed = static_cast<std::uint64_t>(i);
    kept += power_law_gof(x, fit, 100, o).p_value >= 0.05;
  }
  EXPECT_GE(kept, 33);
}

TEST(PowerLawGof, FlagsFewSetsAndIsPure) {
  abm::Rng rng(67);
  const auto x = oracle::power_law(rng, 400, 2.0);
  PowerLawOptions o;
  o.bootstrap_reps = 0;
  const auto fit = fit_power_law(x, o);
  const auto a = power_law_gof(x, fit, 20, o);
  EXPECT_TRUE(a.few_sets);
  EXPECT_EQ(a.p_value, power_law_gof(x, fit, 20, o).p_value);
  EXPECT_EQ(fit_power_law(x, o).zeta, fit.zeta);
}
