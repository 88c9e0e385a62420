#pragma once

#include <span>

namespace abm::stats {

/// Deterministic terms of the test regression. `none` is the pure
/// autoregressive form y_t = a y_{t-1} + e_t.
enum class Deterministic { none, constant, trend };

struct UnitRootResult {
  double statistic{0.0};
  double p_value{0.0};  // interpolated, clipped to the table range
  bool p_clipped{false};
  double critical_value{0.0};  // 5%
  bool reject{false};          // at 5%
  std::size_t nobs{0};         // observations in the test regression
  int lags{0};
};

/// Augmented Dickey-Fuller t test on the y_{t-1} coefficient with `lags`
/// lagged differences. Null: unit root. p in [0.001, 0.999].
[[nodiscard]] UnitRootResult adf_test(std::span<const double> y, Deterministic det = Deterministic::none, int lags = 0);

/// Phillips-Perron Z_t with Bartlett-weighted Newey-West long-run variance.
/// With zero lags it equals the Dickey-Fuller t. Null: unit root.
[[nodiscard]] UnitRootResult pp_test(std::span<const double> y, Deterministic det = Deterministic::none, int lags = 0);

/// KPSS stationarity test (level or trend). Null: stationary.
/// p in [0.01, 0.10].
[[nodiscard]] UnitRootResult kpss_test(std::span<const double> y, bool trend = true, int lags = 0);

/// Dickey-Fuller critical value at probability p (left tail) for an
/// effective sample size. The 1%, 5% and 10% points use response surfaces;
/// other points come from simulated tables.
[[nodiscard]] double df_critical_value(Deterministic det, double p, double nobs);

/// Left-tail Dickey-Fuller p-value, clipped to [0.001, 0.999].
[[nodiscard]] double df_p_value(Deterministic det, double statistic, double nobs, bool* clipped = nullptr);

}  // namespace abm::stats
