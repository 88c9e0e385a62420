#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "abm/agents/fundamental.hpp"
#include "abm/agents/institution.hpp"
#include "abm/agents/price_history.hpp"

using namespace abm::agents;

TEST(Fundamental, StepExamples) {
  EXPECT_DOUBLE_EQ((FundamentalProcess{100.0, 0.01, 0.0}).step(1.0, 0.7).price, 101.0);
  EXPECT_DOUBLE_EQ((FundamentalProcess{100.0, 0.0, 0.3}).step(1.0, 0.0).price, 100.0);
  EXPECT_DOUBLE_EQ((FundamentalProcess{100.0, 0.0, 0.02}).step(1.0, 1.0).price, 102.0);
}

TEST(Fundamental, StaysPositive) {
  const auto p = FundamentalProcess{1.0, 0.0, 2.0, 1e-6}.step(1.0, -5.0);
  EXPECT_GT(p.price, 0.0);
  EXPECT_THROW((void)FundamentalProcess{}.step(0.0, 0.0), std::invalid_argument);
}

TEST(Chartist, Examples) {
  const std::vector<double> flat(10, 5.0);
  EXPECT_DOUBLE_EQ(chartist_average(flat, 4), 0.0);
  const std::vector<double> doubling{1, 2, 4, 8, 16};
  EXPECT_NEAR(chartist_average(doubling, 3), std::log(2.0), 1e-15);
  const double e = std::exp(1.0);
  const std::vector<double> h{1, e, e, e * e};
  EXPECT_NEAR(chartist_average(h, 2), 0.5, 1e-15);
  EXPECT_THROW((void)chartist_average(h, 4), std::invalid_argument);
}

TEST(Chartist, RunningSumsMatchDirectForm) {
  std::vector<double> prices;
  PriceHistory hist;
  double p = 100.0;
  for (int i = 0; i < 300; ++i) {
    p *= std::exp(0.01 * std::sin(0.37 * i) + 0.003 * std::cos(1.3 * i));
    prices.push_back(p);
    hist.push(p);
  }
  for (int l : {2, 7, 50}) {
    EXPECT_NEAR(hist.chartist_average(l), chartist_average(prices, l), 1e-13);
    const auto r = hist.recent_returns(static_cast<std::size_t>(l));
    double m = 0, v = 0;
    for (double x : r) m += x;
    m /= l;
    for (double x : r) v += (x - m) * (x - m);
    EXPECT_NEAR(hist.return_variance(l), v / (l - 1), 1e-12);
  }
}

TEST(Expectations, Examples) {
  Institution a;
  MarketView v;
  v.price = 50.0;
  v.fundamental = 50.0;
  a.g1 = 0.7;
  EXPECT_DOUBLE_EQ(expected_return(a, v, 1.3), 0.0);

  a.g1 = 1.0;
  v.fundamental = std::exp(1.0) * 50.0;
  EXPECT_NEAR(expected_return(a, v, 0.0), 1.0, 1e-15);

  PriceHistory hist;
  for (int i = 0; i < 10; ++i) hist.push(std::exp(0.02 * i));
  a.g1 = 0.5;
  a.g2 = 0.5;
  a.lookback = 5;
  v.history = &hist;
  v.fundamental = v.price;
  EXPECT_NEAR(expected_return(a, v, 0.0), 0.01, 1e-14);

  v.price = 0.0;
  EXPECT_THROW((void)expected_return(a, v, 0.0), std::invalid_argument);
}

TEST(Expectations, ExpectedPrice) {
  EXPECT_EQ(expected_price(123.4, 0.0), 123.4);
  EXPECT_NEAR(expected_price(100.0, std::log(1.05)), 105.0, 1e-12);
  EXPECT_NEAR(expected_price(100.0, -0.1), 90.483741803596, 1e-9);
  EXPECT_LT(expected_price(100.0, 0.01), expected_price(100.0, 0.02));
}

TEST(Wealth, ExamplesAndDefault) {
  Institution a;
  a.cash = 100;
  a.stock = 10;
  EXPECT_DOUBLE_EQ(wealth(a, 5.0), 150.0);
  EXPECT_FALSE(is_technical_default(a, 5.0));
  a.cash = 0;
  a.stock = 0;
  EXPECT_DOUBLE_EQ(wealth(a, 5.0), 0.0);
  EXPECT_FALSE(is_technical_default(a, 5.0));
  a.cash = -600;
  a.stock = 10;
  EXPECT_DOUBLE_EQ(wealth(a, 50.0), -100.0);
  EXPECT_TRUE(is_technical_default(a, 50.0));
}

TEST(Portfolio, RiskyFraction) {
  Institution a;
  a.risk_aversion = 2.0;
  a.max_leverage = 5.0;
  EXPECT_DOUBLE_EQ(optimal_risky_fraction(a, 2.0 * 0.03, 0.03), 1.0);
  EXPECT_DOUBLE_EQ(optimal_risky_fraction(a, 0.0, 0.03), 0.0);
  a.max_leverage = 1.0;
  EXPECT_DOUBLE_EQ(optimal_risky_fraction(a, 0.04, 0.04), 0.5);
  EXPECT_THROW((void)optimal_risky_fraction(a, 0.04, 0.0), std::invalid_argument);
}

TEST(Portfolio, ClosedFormBeatsGrid) {
  // E(r_c) - A/2 var(r_c) with r_c = w * excess, var = w^2 sigma^2.
  Institution a;
  a.risk_aversion = 2.0;
  a.max_leverage = 1.0;
  const double excess = 0.04, var = 0.04;
  double best_w = 0, best_u = -1e9;
  for (int i = 0; i <= 10000; ++i) {
    const double w = i / 10000.0;
    const double u = w * excess - 0.5 * a.risk_aversion * w * w * var;
    if (u > best_u) {
      best_u = u;
      best_w = w;
    }
  }
  EXPECT_NEAR(optimal_risky_fraction(a, excess, var), best_w, 1e-4);
}

TEST(Portfolio, LinearBeforeClampAndBounded) {
  Institution a;
  a.risk_aversion = 3.0;
  a.max_leverage = 100.0;
  a.short_allowed = true;
  a.min_fraction = -100.0;
  const double w1 = optimal_risky_fraction(a, 0.01, 0.02);
  EXPECT_NEAR(optimal_risky_fraction(a, 0.02, 0.02), 2.0 * w1, 1e-15);
  EXPECT_NEAR(optimal_risky_fraction(a, 0.02, 0.04), w1, 1e-15);
  a.max_leverage = 1.0;
  a.short_allowed = false;
  for (double ex : {-1.0, -0.01, 0.0, 0.01, 1.0}) {
    const double w = optimal_risky_fraction(a, ex, 0.01);
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(Horizon, Reciprocal) {
  EXPECT_EQ(horizon_for_entry_probability(0.1), 10);
  EXPECT_EQ(horizon_for_entry_probability(0.3), 4);
  EXPECT_EQ(horizon_for_entry_probability(1.0), 1);
  EXPECT_THROW((void)horizon_for_entry_probability(0.0), std::invalid_argument);
}

namespace {

// An agent whose expectation is exactly the current price, so the excess
// return is -r_f alone.
Institution flat_agent(double cash, std::int64_t stock) {
  Institution a;
  a.id = 3;
  a.cash = cash;
  a.stock = stock;
  a.risk_aversion = 2.0;
  a.horizon = 1;
  return a;
}

MarketView flat_view(double rf, double variance) {
  MarketView v;
  v.price = 10.0;
  v.fundamental = 10.0;
  v.risk_free_rate = rf;
  v.variance_floor = variance;
  return v;
}

}  // namespace

TEST(GenerateOrder, AlreadyAtTarget) {
  // excess 0.01 / (2 * 0.01) = 0.5 of W = 1000 at p = 10 is 50 shares.
  const auto intent = generate_order(flat_agent(500, 50), flat_view(-0.01, 0.01), 0.0, 0.5);
  EXPECT_DOUBLE_EQ(intent.risky_fraction, 0.5);
  EXPECT_EQ(intent.target_shares, 50);
  EXPECT_FALSE(intent.order);
}

TEST(GenerateOrder, FullAllocationBuys) {
  const auto intent = generate_order(flat_agent(1000, 0), flat_view(-0.01, 1e-4), 0.0, 0.5);
  ASSERT_TRUE(intent.order);
  EXPECT_EQ(intent.order->side, abm::market::Side::buy);
  EXPECT_EQ(intent.order->quantity, 100);
  EXPECT_DOUBLE_EQ(intent.order->limit_price, 10.0);
}

TEST(GenerateOrder, ShortSaleClampedAtHoldings) {
  auto a = flat_agent(0, 10);
  a.g1 = 1.0;
  auto v = flat_view(0.0, 1e-4);
  v.fundamental = 9.0;
  const auto intent = generate_order(a, v, 0.0, 0.5);
  ASSERT_TRUE(intent.order);
  EXPECT_EQ(intent.order->side, abm::market::Side::sell);
  EXPECT_EQ(intent.order->quantity, 10);
  EXPECT_LT(intent.order->limit_price, 10.0);
  EXPECT_GT(intent.order->limit_price, 9.0);
}

TEST(GenerateOrder, CapitalRuleCutsTarget) {
  auto v = flat_view(-0.01, 1e-4);
  v.risk_metric = 0.1;
  v.capital_multiplier = 2.0;
  const auto intent = generate_order(flat_agent(1000, 0), v, 0.0, 0.5);
  // |s| <= W / (k m p) = 1000 / (2 * 0.1 * 10) = 500 does not bind at 100.
  EXPECT_FALSE(intent.capital_bound);
  v.capital_multiplier = 20.0;
  const auto bound = generate_order(flat_agent(1000, 0), v, 0.0, 0.5);
  EXPECT_TRUE(bound.capital_bound);
  EXPECT_EQ(bound.target_shares, 50);
  ASSERT_TRUE(bound.order);
  EXPECT_EQ(bound.order->quantity, 50);
}

TEST(GenerateOrder, LeverageAllowsBorrowing) {
  auto a = flat_agent(1000, 0);
  a.max_leverage = 2.0;
  const auto intent = generate_order(a, flat_view(-0.01, 1e-4), 0.0, 0.5);
  ASSERT_TRUE(intent.order);
  EXPECT_EQ(intent.order->quantity, 200);
}

TEST(GenerateOrder, DefaultedAgentGetsNoOrder) {
  auto a = flat_agent(-2000, 100);
  EXPECT_FALSE(generate_order(a, flat_view(-0.01, 1e-4), 0.0, 0.5).order);
}
