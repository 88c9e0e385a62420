#include "abm/regulation/risk.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace abm::regulation {

std::string_view to_string(RiskMetric m) noexcept {
  switch (m) {
    case RiskMetric::var: return "var";
    case RiskMetric::es: return "es";
    case RiskMetric::none: break;
  }
  return "none";
}

RiskMetric parse_risk_metric(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "none") return RiskMetric::none;
  if (lower == "var") return RiskMetric::var;
  if (lower == "es") return RiskMetric::es;
  throw std::invalid_argument("unknown risk metric '" + std::string(text) + "' (expected none|var|es)");
}

void RiskConfig::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("risk.confidence must lie in (0,1)");
  if (window < kMinRiskWindow) throw std::invalid_argument("risk.window must be >= 50");
  if (horizon < 1) throw std::invalid_argument("risk.horizon must be >= 1");
  if (update_interval < 1) throw std::invalid_argument("risk.update_interval must be >= 1");
  if (!(capital_multiplier > 0.0)) throw std::invalid_argument("risk.multiplier must be positive");
}

namespace {

void check_window(std::span<const double> returns) {
  if (returns.size() < static_cast<std::size_t>(kMinRiskWindow)) {
    throw std::invalid_argument("risk estimate needs at least 50 returns");
  }
}

double sorted_lower_quantile(const std::vector<double>& sorted, double p) {
  const auto n = static_cast<double>(sorted.size());
  const double h = n * p;
  if (h <= 1.0) return sorted.front();
  if (h >= n) return sorted.back();
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo) - 1;
  return sorted[i] + (h - lo) * (sorted[i + 1] - sorted[i]);
}

}  // namespace

double lower_quantile(std::span<const double> sample, double p) {
  if (sample.empty()) throw std::invalid_argument("lower_quantile: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_lower_quantile(sorted, p);
}

double var_estimate(std::span<const double> returns, double confidence, int horizon) {
  check_window(returns);
  const double q = lower_quantile(returns, 1.0 - confidence);
  return std::max(0.0, -q) * std::sqrt(static_cast<double>(horizon));
}

double es_estimate(std::span<const double> returns, double confidence, int horizon) {
  check_window(returns);
  std::vector<double> sorted(returns.begin(), returns.end());
  std::sort(sorted.begin(), sorted.end());
  const double q = sorted_lower_quantile(sorted, 1.0 - confidence);

  double tail_sum = 0.0;
  std::size_t tail_n = 0;
  for (double r : sorted) {
    if (!(r < q)) break;
    tail_sum += r;
    ++tail_n;
  }
  const double tail = tail_n == 0 ? q : tail_sum / static_cast<double>(tail_n);
  return std::max(0.0, -tail) * std::sqrt(static_cast<double>(horizon));
}

double risk_measure(const RiskConfig& cfg, std::span<const double> returns) {
  switch (cfg.metric) {
    case RiskMetric::var: return var_estimate(returns, cfg.confidence, cfg.horizon);
    case RiskMetric::es: return es_estimate(returns, cfg.confidence, cfg.horizon);
    case RiskMetric::none: break;
  }
  return 0.0;
}

std::int64_t apply_capital_constraint(std::int64_t desired_shares, double wealth, double price, double risk_metric,
                                      double multiplier) {
  if (!(wealth > 0.0)) return 0;
  if (risk_metric < 0.0) throw std::invalid_argument("apply_capital_constraint: negative risk metric");
  if (risk_metric == 0.0) return desired_shares;
  if (!(price > 0.0) || !(multiplier > 0.0)) {
    throw std::invalid_argument("apply_capital_constraint: price and multiplier must be positive");
  }
  const double cap_d = std::floor(wealth / (multiplier * risk_metric * price));
  const auto magnitude = desired_shares < 0 ? -desired_shares : desired_shares;
  if (cap_d >= static_cast<double>(magnitude)) return desired_shares;
  const auto cap = static_cast<std::int64_t>(cap_d);
  return desired_shares < 0 ? -cap : cap;
}

}  // namespace abm::regulation
