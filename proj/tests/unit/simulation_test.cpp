#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "abm/engine/simulation.hpp"

using namespace abm::engine;

namespace {

TreatmentConfig small(int days = 20) {
  TreatmentConfig c;
  c.n_agents = 40;
  c.n_days = days;
  c.ticks_per_day = 200;
  return c;
}

void expect_same(const SimulationRecord& a, const SimulationRecord& b) {
  EXPECT_EQ(a.ticks.price, b.ticks.price);
  EXPECT_EQ(a.ticks.volume, b.ticks.volume);
  EXPECT_EQ(a.ticks.n_trades, b.ticks.n_trades);
  EXPECT_EQ(a.ticks.fundamental, b.ticks.fundamental);
  EXPECT_EQ(a.daily.close, b.daily.close);
  EXPECT_EQ(a.trade_ticks, b.trade_ticks);
}

double mean_abs_bubble(const SimulationRecord& r) {
  double s = 0;
  for (std::size_t i = 0; i < r.ticks.size(); ++i) {
    s += std::abs((r.ticks.price[i] - r.ticks.fundamental[i]) / r.ticks.price[i]);
  }
  return s / static_cast<double>(r.ticks.size());
}

}  // namespace

TEST(SampleDaily, Examples) {
  TickSeries t;
  for (int i = 0; i < 6; ++i) {
    t.tick.push_back(i);
    t.price.push_back(i + 1.0);
    t.fundamental.push_back(10.0 * (i + 1));
    t.n_trades.push_back(i % 2);
  }
  t.volume = {1, 2, 3, 0, 0, 4};
  const auto d = sample_daily(t, 3);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.close, (std::vector<double>{3, 6}));
  EXPECT_EQ(d.fundamental, (std::vector<double>{30, 60}));
  EXPECT_EQ(d.volume, (std::vector<std::int64_t>{6, 4}));
  EXPECT_EQ(d.n_trades, (std::vector<std::int64_t>{1, 2}));
}

TEST(Simulation, LengthsMatchConfig) {
  const auto cfg = small(12);
  const auto r = run_simulation(cfg, 5);
  EXPECT_EQ(r.ticks.size(), 12u * 200u);
  EXPECT_EQ(r.daily.size(), 12u);
  EXPECT_EQ(r.agents.size(), 40u);
  for (std::size_t d = 0; d < r.daily.size(); ++d) {
    EXPECT_EQ(r.daily.close[d], r.ticks.price[(d + 1) * 200 - 1]);
  }
  EXPECT_EQ(r.trade_ticks.size(),
            static_cast<std::size_t>(std::accumulate(r.ticks.n_trades.begin(), r.ticks.n_trades.end(), std::int64_t{0})));
  EXPECT_TRUE(std::is_sorted(r.trade_ticks.begin(), r.trade_ticks.end()));
}

TEST(Simulation, DefaultDailyLength) {
  TreatmentConfig c;
  c.n_agents = 5;
  const auto r = run_simulation(c, 1);
  EXPECT_EQ(r.daily.size(), 504u);
}

TEST(Simulation, Deterministic) {
  const auto cfg = small();
  expect_same(run_simulation(cfg, 77), run_simulation(cfg, 77));
  EXPECT_NE(run_simulation(cfg, 77).ticks.price, run_simulation(cfg, 78).ticks.price);
}

TEST(Simulation, NoAgentsNoTrades) {
  auto cfg = small(5);
  cfg.n_agents = 0;
  cfg.fundamental_sigma = 0.001;
  const auto r = run_simulation(cfg, 3);
  for (std::size_t i = 0; i < r.ticks.size(); ++i) {
    EXPECT_EQ(r.ticks.volume[i], 0);
    EXPECT_EQ(r.ticks.price[i], r.ticks.price[0]);
  }
}

TEST(Simulation, SharesConservedAndBudgetsHold) {
  auto cfg = small(30);
  cfg.risk.metric = abm::regulation::RiskMetric::es;
  cfg.risk.confidence = 0.975;
  const auto r = run_simulation(cfg, 8);
  ASSERT_FALSE(r.panel.empty());
  std::map<int, std::int64_t> by_day;
  for (const auto& s : r.panel) {
    by_day[s.day] += s.shares;
    EXPECT_GE(s.shares, 0);
    if (!s.defaulted) EXPECT_GE(s.cash, -1e-6);
  }
  for (const auto& [day, total] : by_day) EXPECT_EQ(total, 40 * 100) << "day " << day;
}

TEST(Simulation, QuietFundamentalistsStayAtValue) {
  auto cfg = small(10);
  cfg.fundamental_sigma = 0.0;
  cfg.g1 = Distribution::constant(1.0);
  cfg.g2 = Distribution::constant(0.0);
  cfg.noise = Distribution::constant(0.0);
  const auto r = run_simulation(cfg, 4);
  for (std::size_t i = 0; i < r.ticks.size(); ++i) {
    EXPECT_LE(std::abs(r.ticks.price[i] - r.ticks.fundamental[i]), cfg.tick_size + 1e-12);
  }
}

TEST(Simulation, FundamentalistsDampBubbles) {
  auto anchored = small(60);
  auto unanchored = anchored;
  unanchored.g1 = Distribution::constant(0.0);
  double b_anchored = 0, b_unanchored = 0;
  const int runs = 12;
  for (int i = 0; i < runs; ++i) {
    b_anchored += mean_abs_bubble(run_simulation(anchored, run_seed(3, i)));
    b_unanchored += mean_abs_bubble(run_simulation(unanchored, run_seed(3, i)));
  }
  EXPECT_LT(b_anchored, b_unanchored);
}

TEST(Batch, PairedSeedsAndThreadIndependence) {
  auto base = small(8);
  auto es = base;
  es.name = "es";
  const std::vector<TreatmentConfig> same{base, es};
  const auto one = run_batch(same, 3, 1);
  const auto many = run_batch(same, 3, 3);
  ASSERT_EQ(one.size(), 2u);
  ASSERT_EQ(one[0].size(), 3u);
  for (int r = 0; r < 3; ++r) {
    expect_same(one[0][static_cast<std::size_t>(r)], many[0][static_cast<std::size_t>(r)]);
    // Without a capital rule the two treatments are the same experiment.
    expect_same(one[0][static_cast<std::size_t>(r)], one[1][static_cast<std::size_t>(r)]);
  }

  es.risk.metric = abm::regulation::RiskMetric::es;
  const std::vector<TreatmentConfig> paired{base, es};
  const auto p = run_batch(paired, 2, 2);
  for (int r = 0; r < 2; ++r) {
    const auto& a = p[0][static_cast<std::size_t>(r)];
    const auto& b = p[1][static_cast<std::size_t>(r)];
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.ticks.fundamental, b.ticks.fundamental);
    ASSERT_EQ(a.agents.size(), b.agents.size());
    for (std::size_t i = 0; i < a.agents.size(); ++i) {
      EXPECT_EQ(a.agents[i].g1, b.agents[i].g1);
      EXPECT_EQ(a.agents[i].lookback, b.agents[i].lookback);
    }
  }
}

TEST(Batch, RejectsMismatchedTreatments) {
  auto a = small(5);
  auto b = a;
  b.n_agents = 41;
  const std::vector<TreatmentConfig> t{a, b};
  EXPECT_THROW(check_comparable(t), std::invalid_argument);
  EXPECT_THROW((void)run_batch(t, 1), std::invalid_argument);
}

TEST(Simulation, InvalidConfigFailsEarly) {
  auto c = small(5);
  c.n_days = 0;
  EXPECT_THROW((void)run_simulation(c, 1), std::invalid_argument);
}
