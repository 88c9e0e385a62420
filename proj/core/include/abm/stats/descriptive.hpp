#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "abm/stats/correlation.hpp"

namespace abm::stats {

/// log(p[i+dt] / p[i]) for every i, overlapping. Throws on a nonpositive price
/// or dt < 1.
[[nodiscard]] std::vector<double> log_returns(std::span<const double> prices, int dt = 1);

/// Population moments. Kurtosis is the raw fourth standardised moment (3 for
/// a normal), not excess. Skewness and kurtosis are empty for constant input.
struct Moments {
  double mean{0.0};
  double std{0.0};
  double min{0.0};
  double max{0.0};
  std::optional<double> skewness;
  std::optional<double> kurtosis;
};

/// Needs at least 4 values.
[[nodiscard]] Moments moments(std::span<const double> x);

struct ScaleKurtosis {
  int dt{1};
  std::optional<double> kurtosis;  // empty when undefined
  bool insufficient{false};        // fewer than 4 returns at this scale
};

[[nodiscard]] std::vector<ScaleKurtosis> kurtosis_by_scale(std::span<const double> prices, std::span<const int> scales);

/// (p - p_f) / p.
[[nodiscard]] std::vector<double> bubble_series(std::span<const double> prices, std::span<const double> fundamentals);

enum class Direction { gain, loss };

struct HorizonStats {
  std::vector<int> samples;          // first-passage time per uncensored start
  std::vector<std::int64_t> counts;  // counts[h] = number of samples equal to h
  std::size_t censored{0};
  int modal{0};  // smallest most frequent horizon, 0 when no samples
  double mean{0.0};
  double median{0.0};
  double std{0.0};
};

/// For each start t, the smallest dt > 0 with log(p[t+dt]/p[t]) >= rho (gain)
/// or <= -rho (loss). Starts that never cross are censored.
[[nodiscard]] HorizonStats investment_horizons(std::span<const double> prices, double rho, Direction direction);

inline constexpr double kTradingDays = 252.0;

struct EquityPremium {
  double realised{0.0};  // annualised mean daily log-return
  double premium{0.0};
};

[[nodiscard]] EquityPremium equity_premium(std::span<const double> daily_returns, double risk_free_annual);

struct ExcessVolatility {
  double market{0.0};       // annualised
  double fundamental{0.0};  // annualised
  bool excess{false};
};

[[nodiscard]] ExcessVolatility excess_volatility(std::span<const double> market_returns,
                                                 std::span<const double> fundamental_returns);

/// v(t) = mean |log Z(t'+dt) - log Z(t')| over the forward window of
/// n = window / dt steps. `window` must be a positive multiple of dt.
[[nodiscard]] std::vector<double> rolling_volatility(std::span<const double> prices, int window, int dt);

/// Distinct event times, first-differenced. Empty when fewer than two
/// distinct times. Input must be nondecreasing.
[[nodiscard]] std::vector<double> durations(std::span<const std::int64_t> times);

struct DurationFacts {
  double mean{0.0};
  double std{0.0};
  double dispersion{0.0};  // std / mean
  std::optional<AcfResult> acf;          // of x; empty when too short or constant
  std::optional<AcfResult> squared_acf;  // of x^2
};

/// Throws when the mean is zero or the series is empty.
[[nodiscard]] DurationFacts duration_facts(std::span<const double> x, int max_lag = 100);

}  // namespace abm::stats
