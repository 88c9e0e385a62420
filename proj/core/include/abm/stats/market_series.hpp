#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "abm/stats/correlation.hpp"
#include "abm/stats/power_law.hpp"

namespace abm::engine {
struct SimulationRecord;
}

namespace abm::stats {

/// The series one run (simulated or external) offers to the fact battery.
/// Daily vectors are required; tick vectors are empty for low-frequency-only
/// data. Missing values (undefined spread) are NaN.
struct MarketSeries {
  std::string label;
  std::string group;  // treatment name for simulator output

  std::vector<double> daily_close;
  std::vector<double> daily_fundamental;  // optional
  std::vector<double> daily_volume;       // optional
  std::vector<double> daily_trades;       // optional

  std::vector<double> tick_price;
  std::vector<double> tick_fundamental;
  std::vector<double> tick_spread;
  std::vector<double> tick_volume;
  std::vector<double> tick_trades;
  std::vector<double> bid_depth;
  std::vector<double> ask_depth;
  std::vector<std::int64_t> trade_times;  // nondecreasing

  double risk_free_annual{0.0};

  [[nodiscard]] bool has_ticks() const noexcept { return !tick_price.empty(); }
  [[nodiscard]] bool has_fundamental() const noexcept { return !daily_fundamental.empty(); }
};

[[nodiscard]] MarketSeries market_series(const engine::SimulationRecord& rec);

/// Reads a run directory written by the simulator (daily.csv, optional
/// ticks.csv, optional manifest.json).
[[nodiscard]] MarketSeries load_run_directory(const std::filesystem::path& dir);

/// Reads one headered CSV of daily data. Recognised columns: close or
/// price (required), fundamental, volume, n_trades. Throws on a missing
/// price column or an unparsable value.
[[nodiscard]] MarketSeries load_daily_csv(const std::filesystem::path& file);

/// CCF of the relative bubble and daily log-returns, B_t paired with
/// r_t = log(p_t / p_{t-1}).
[[nodiscard]] CcfResult bubble_return_ccf(const MarketSeries& s, int max_lag = 20);

inline constexpr std::array<const char*, 4> kPowerLawSeries{"returns", "volatility", "volume", "trades"};

struct PowerLawEntry {
  std::optional<PowerLawFit> fit;
  std::string error;
};

/// Fits with gof p-values for |daily returns|, 5-day rolling volatility,
/// daily volume and daily trade counts (in kPowerLawSeries order). Zero
/// values are dropped before fitting.
[[nodiscard]] std::array<PowerLawEntry, 4> power_law_panel(const MarketSeries& s, int n_synth = 1000,
                                                           const PowerLawOptions& opts = {});

struct VolumeVolatility {
  CcfResult volume;
  CcfResult trades;
  std::size_t bins{0};
};

/// Non-overlapping bins of `bin` ticks: volatility is the mean absolute tick
/// log-return inside the bin, volume and trade counts are bin totals.
[[nodiscard]] VolumeVolatility volume_volatility_ccf(const MarketSeries& s, int bin = 30, int max_lag = 20);

struct SpreadFacts {
  double bounce{0.0};  // lag-1 tick-return autocorrelation
  double acf_bound{0.0};
  CcfResult bid;  // spread vs bid depth
  CcfResult ask;  // spread vs ask depth
  std::size_t dropped{0};  // ticks without a defined spread
};

[[nodiscard]] SpreadFacts spread_facts(const MarketSeries& s, int max_lag = 20);

}  // namespace abm::stats
