#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "abm/engine/output.hpp"
#include "abm/engine/simulation.hpp"
#include "abm/stats/battery.hpp"
#include "abm/stats/descriptive.hpp"
#include "abm/stats/market_series.hpp"
#include "oracles.hpp"

using namespace abm::stats;
namespace fs = std::filesystem;

namespace {

abm::engine::SimulationRecord small_run(std::uint64_t seed, int days = 80) {
  abm::engine::TreatmentConfig c;
  c.n_agents = 60;
  c.n_days = days;
  return abm::engine::run_simulation(c, seed);
}

BatteryConfig quick() {
  BatteryConfig cfg;
  cfg.power_law_synth = 20;
  cfg.power_law.bootstrap_reps = 5;
  cfg.power_law.max_candidates = 20;
  cfg.threads = 2;
  return cfg;
}

fs::path temp_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("abm_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Summarise, QuartilesAndOutliers) {
  const std::vector<double> v{1, 2, 3, 4, 100, NAN};
  const auto s = summarise(v);
  EXPECT_EQ(s.n, 5u);
  EXPECT_DOUBLE_EQ(s.mean, 22.0);
  EXPECT_DOUBLE_EQ(s.median, 3.0);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.max, 100.0);
  ASSERT_EQ(s.outliers.size(), 1u);
  EXPECT_EQ(s.outliers[0], 4u);
}

TEST(Battery, SingleRunAggregatesEqualRun) {
  const auto s = market_series(small_run(1));
  const auto cfg = quick();
  const auto facts = compute_run_facts(s, cfg);
  const std::vector<MarketSeries> batch{s};
  const auto report = run_fact_battery(batch, cfg);
  ASSERT_EQ(report.groups.size(), 1u);
  const auto& g = report.groups[0];
  for (const auto& e : g.facts) {
    ASSERT_TRUE(e.available) << e.id;
    const auto it = facts.find(e.id);
    ASSERT_NE(it, facts.end());
    for (const auto& [k, v] : it->second.scalars) {
      if (!std::isfinite(v)) continue;
      EXPECT_DOUBLE_EQ(e.scalars.at(k).mean, v) << e.id << " " << k;
      EXPECT_DOUBLE_EQ(e.scalars.at(k).median, v) << e.id << " " << k;
    }
  }
}

TEST(Battery, IdenticalRunsHaveNoDispersion) {
  const auto s = market_series(small_run(2));
  auto cfg = quick();
  cfg.facts = {"moments", "acf", "durations"};
  const std::vector<MarketSeries> batch{s, s, s};
  const auto report = run_fact_battery(batch, cfg);
  for (const auto& e : report.groups[0].facts) {
    for (const auto& [k, sum] : e.scalars) {
      EXPECT_EQ(sum.q25, sum.q75) << e.id << " " << k;
      EXPECT_EQ(sum.min, sum.max) << e.id << " " << k;
    }
  }
}

TEST(Battery, EveryEnabledFactHasAnEntry) {
  auto cfg = quick();
  cfg.facts = {"moments", "hill", "unit_root"};
  const std::vector<MarketSeries> batch{market_series(small_run(3))};
  const auto report = run_fact_battery(batch, cfg);
  std::set<std::string> ids;
  for (const auto& e : report.groups[0].facts) ids.insert(e.id);
  EXPECT_EQ(ids, (std::set<std::string>{"moments.daily", "moments.tick", "hill.daily", "hill.tick", "unit_root.daily",
                                        "unit_root.tick"}));
}

TEST(Battery, DailyOnlyInputMarksTickFactsUnavailable) {
  auto s = market_series(small_run(4));
  MarketSeries daily;
  daily.label = "csv";
  daily.group = "csv";
  daily.daily_close = s.daily_close;
  const std::vector<MarketSeries> batch{daily};
  const auto report = run_fact_battery(batch, quick());
  const auto& g = report.groups[0];
  ASSERT_TRUE(g.find("durations.tick"));
  EXPECT_FALSE(g.find("durations.tick")->available);
  EXPECT_FALSE(g.find("moments.tick")->available);
  EXPECT_FALSE(g.find("bubbles.daily")->available);
  EXPECT_TRUE(g.find("moments.daily")->available);
}

TEST(Battery, FailuresAreRecordedNotThrown) {
  MarketSeries tiny;
  tiny.label = tiny.group = "tiny";
  tiny.daily_close = {100, 101, 100.5, 101.2, 100.9, 101.1};
  auto cfg = quick();
  cfg.facts = {"moments", "hill", "unit_root"};
  const std::vector<MarketSeries> batch{tiny};
  const auto report = run_fact_battery(batch, cfg);
  const auto* hill = report.groups[0].find("hill.daily");
  ASSERT_TRUE(hill);
  EXPECT_EQ(hill->failed, 1u);
  EXPECT_FALSE(hill->verdict.holds);
}

TEST(Battery, GroupsFollowFirstSeenOrderAndJsonRoundTrips) {
  auto a = market_series(small_run(5, 40));
  auto b = a;
  a.group = "zeta";
  b.group = "alpha";
  b.label = "other";
  auto cfg = quick();
  cfg.facts = {"moments", "acf", "vol_clustering", "hill"};
  const std::vector<MarketSeries> batch{a, b, a};
  const auto report = run_fact_battery(batch, cfg);
  ASSERT_EQ(report.groups.size(), 2u);
  EXPECT_EQ(report.groups[0].name, "zeta");
  EXPECT_EQ(report.groups[0].labels.size(), 2u);

  const auto text = to_json(report);
  const auto back = report_from_json(text);
  EXPECT_EQ(to_json(back), text);
  EXPECT_THROW((void)report_from_json("{\"schema\":\"other\"}"), std::runtime_error);
  EXPECT_THROW((void)report_from_json("not json"), std::runtime_error);

  const auto dir = temp_dir("csvs");
  const auto files = write_fact_csvs(report, dir);
  EXPECT_FALSE(files.empty());
  for (const auto& f : files) EXPECT_TRUE(fs::exists(f));
  fs::remove_all(dir);
}

TEST(MarketSeries, DirectoryRoundTrip) {
  const auto rec = small_run(6, 30);
  const auto dir = temp_dir("rundir");
  abm::engine::write_run(rec, dir, "test");
  const auto loaded = load_run_directory(dir);
  const auto direct = market_series(rec);
  ASSERT_EQ(loaded.daily_close.size(), direct.daily_close.size());
  for (std::size_t i = 0; i < direct.daily_close.size(); ++i) EXPECT_EQ(loaded.daily_close[i], direct.daily_close[i]);
  EXPECT_EQ(loaded.tick_price, direct.tick_price);
  EXPECT_EQ(loaded.tick_trades, direct.tick_trades);
  EXPECT_EQ(durations(loaded.trade_times), durations(direct.trade_times));
  EXPECT_EQ(loaded.group, "unregulated");

  const auto daily = load_daily_csv(dir / "daily.csv");
  EXPECT_EQ(daily.daily_close, direct.daily_close);
  EXPECT_TRUE(daily.tick_price.empty());
  fs::remove_all(dir);
}

TEST(MarketSeries, BubbleCcfOfIdenticalSeries) {
  MarketSeries s;
  abm::Rng rng(7);
  s.daily_close = {100.0};
  for (int i = 0; i < 300; ++i) s.daily_close.push_back(s.daily_close.back() * std::exp(0.01 * abm::standard_normal(rng)));
  s.daily_fundamental.assign(s.daily_close.size(), 100.0);
  const auto c = bubble_return_ccf(s, 5);
  EXPECT_GT(c.at(0), 0.0);
  EXPECT_EQ(c.coeffs.size(), 11u);
}

TEST(MarketSeries, SpreadBounce) {
  // Trades alternate between bid and ask around a fixed value.
  MarketSeries s;
  abm::Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const bool at_ask = rng.below(2) == 1;
    s.tick_price.push_back(at_ask ? 100.05 : 99.95);
    s.tick_spread.push_back(i % 10 == 0 ? NAN : 0.1);
    s.bid_depth.push_back(static_cast<double>(rng.below(100)));
    s.ask_depth.push_back(static_cast<double>(rng.below(100)));
  }
  for (std::size_t i = 0; i < s.tick_spread.size(); ++i) {
    if (!std::isnan(s.tick_spread[i])) s.tick_spread[i] += 0.01 * rng.uniform();
  }
  const auto f = spread_facts(s, 5);
  EXPECT_LT(f.bounce, -0.4);
  EXPECT_EQ(f.dropped, 200u);
  EXPECT_LT(std::abs(f.bid.at(0)), 3 * f.bid.bound);
}

TEST(MarketSeries, VolumeVolatilityIdentical) {
  MarketSeries s;
  abm::Rng rng(9);
  s.tick_price = {100.0};
  for (int i = 0; i < 6000; ++i) {
    const double vol = 0.001 * (1.0 + 0.9 * std::sin(i / 300.0));
    s.tick_price.push_back(s.tick_price.back() * std::exp(vol * abm::standard_normal(rng)));
  }
  s.tick_volume.assign(s.tick_price.size(), 0.0);
  s.tick_trades.assign(s.tick_price.size(), 0.0);
  for (std::size_t i = 1; i < s.tick_price.size(); ++i) {
    s.tick_volume[i] = std::abs(std::log(s.tick_price[i] / s.tick_price[i - 1]));
    s.tick_trades[i] = rng.uniform();
  }
  const auto vv = volume_volatility_ccf(s, 30, 5);
  EXPECT_NEAR(vv.volume.at(0), 1.0, 1e-9);
  EXPECT_LT(std::abs(vv.trades.at(0)), 3 * vv.trades.bound);
}

TEST(PowerLawPanel, FourNamedFits) {
  auto s = market_series(small_run(10, 300));
  PowerLawOptions o;
  o.bootstrap_reps = 0;
  o.max_candidates = 20;
  const auto panel = power_law_panel(s, 20, o);
  EXPECT_EQ(panel.size(), 4u);
  for (const auto& p : panel) EXPECT_TRUE(p.fit || !p.error.empty());
}
