#include <gtest/gtest.h>

#include <cmath>

#include "abm/stats/tails.hpp"
#include "oracles.hpp"

using namespace abm::stats;

TEST(Hill, HandExample) {
  const double e = std::exp(1.0);
  const std::vector<double> x{1, e, e * e};
  EXPECT_NEAR(hill_estimator(x, 0.7, Tail::right), 2.0 / 3.0, 1e-15);
  const std::vector<double> neg{-1, -e, -e * e};
  EXPECT_NEAR(hill_estimator(neg, 0.7, Tail::left), 2.0 / 3.0, 1e-15);
}

TEST(Hill, Errors) {
  EXPECT_THROW((void)hill_estimator(std::vector<double>(10, 1.0), 0.1, Tail::right), std::invalid_argument);
  EXPECT_THROW((void)hill_estimator(std::vector<double>(100, 2.0), 0.1, Tail::right), std::invalid_argument);
  EXPECT_THROW((void)hill_estimator(std::vector<double>{1, 2, 3}, 0.0, Tail::right), std::invalid_argument);
  std::vector<double> mostly_zero(100, 0.0);
  mostly_zero[0] = 1.0;
  EXPECT_THROW((void)hill_estimator(mostly_zero, 0.1, Tail::right), std::invalid_argument);
}

TEST(Hill, ParetoRecovery) {
  abm::Rng rng(41);
  const auto x = oracle::pareto(rng, 100000, 3.0);
  EXPECT_NEAR(hill_estimator(x, 0.05, Tail::right), 3.0, 0.15);
}

TEST(Hill, ScaleInvariant) {
  abm::Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = oracle::normals(rng, 1000 + rng.below(5000));
    const double c = std::exp((rng.uniform() - 0.5) * 20.0);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
    for (Tail t : {Tail::left, Tail::right}) {
      const double a = hill_estimator(x, 0.05, t);
      EXPECT_NEAR(hill_estimator(y, 0.05, t), a, 1e-9 * a);
    }
  }
}

TEST(Hill, ExponentialTailIsThinner) {
  abm::Rng rng(43);
  std::vector<double> ex(100000);
  for (auto& v : ex) v = -std::log(1.0 - rng.uniform());
  const auto p = oracle::pareto(rng, 100000, 3.0);
  EXPECT_GT(hill_estimator(ex, 0.01, Tail::right), hill_estimator(p, 0.01, Tail::right));
}

TEST(HillPanel, ShapeAndSymmetry) {
  abm::Rng rng(44);
  auto x = oracle::pareto(rng, 200000, 3.0);
  for (std::size_t i = 0; i < x.size(); i += 2) x[i] = -x[i];
  const auto panel = hill_panel(x);
  ASSERT_EQ(panel.size(), 4u);
  for (std::size_t f = 0; f < 4; ++f) {
    ASSERT_TRUE(panel[f][0]);
    ASSERT_TRUE(panel[f][1]);
    EXPECT_NEAR(*panel[f][0], 3.0, 0.35);
    EXPECT_NEAR(*panel[f][1], 3.0, 0.35);
    EXPECT_NEAR(*panel[f][0], *panel[f][1], 0.4);
  }
}

TEST(HillPanel, MissingEntriesStayEmpty) {
  std::vector<double> x(1000, 0.0);
  for (std::size_t i = 0; i < 30; ++i) x[i] = 1.0 + static_cast<double>(i);
  const auto panel = hill_panel(x);
  EXPECT_TRUE(panel[0][1]);
  EXPECT_FALSE(panel[3][1]);
  EXPECT_FALSE(panel[0][0]);
}
