#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace abm::regulation {

enum class RiskMetric : std::uint8_t { none, var, es };

[[nodiscard]] std::string_view to_string(RiskMetric m) noexcept;
/// Parses "none", "var" or "es" (case-insensitive). Throws std::invalid_argument.
[[nodiscard]] RiskMetric parse_risk_metric(std::string_view text);

/// Market-risk capital rule. Defaults follow the Basel III market-risk
/// standard: 99% for VaR, 97.5% for ES.
struct RiskConfig {
  RiskMetric metric{RiskMetric::none};
  double confidence{0.99};
  int window{250};
  int horizon{1};
  double capital_multiplier{3.0};
  int update_interval{1};  // ticks between re-estimates of the metric

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  [[nodiscard]] static double default_confidence(RiskMetric m) noexcept { return m == RiskMetric::es ? 0.975 : 0.99; }
};

inline constexpr int kMinRiskWindow = 50;

/// Lower empirical quantile of an unsorted sample at probability `p`: the
/// inverse of the piecewise-linear empirical CDF, Q(p) = x(h) + frac(h)
/// (x(h+1) - x(h)) with h = n p on 1-based order statistics, clamped to
/// [x(1), x(n)].
[[nodiscard]] double lower_quantile(std::span<const double> sample, double p);

/// Historical-simulation Value-at-Risk of per-tick log-returns, as a
/// non-negative loss rate scaled by sqrt(horizon).
[[nodiscard]] double var_estimate(std::span<const double> returns, double confidence, int horizon);

/// Historical-simulation Expected Shortfall: mean of the returns strictly
/// below the VaR quantile, negated, floored at zero and horizon-scaled.
/// With no strict exceedances it equals the VaR.
[[nodiscard]] double es_estimate(std::span<const double> returns, double confidence, int horizon);

/// Metric selected by `cfg` over the trailing `returns` window. Zero for RiskMetric::none.
[[nodiscard]] double risk_measure(const RiskConfig& cfg, std::span<const double> returns);

/// Cap a desired share position so that k * m * |s| * p <= wealth.
/// Sign is preserved and the cap is floored to whole shares. A metric of
/// zero leaves the position unconstrained; non-positive wealth allows none.
[[nodiscard]] std::int64_t apply_capital_constraint(std::int64_t desired_shares, double wealth, double price,
                                                    double risk_metric, double multiplier);

}  // namespace abm::regulation
