#pragma once

#include <cstdint>
#include <optional>

#include "abm/agents/price_history.hpp"
#include "abm/market/order.hpp"
#include "abm/random.hpp"

namespace abm::agents {

/// One financial institution. Weights follow the expectation rule
/// g1 * log(pf/p) + g2 * chartist + noise * eps; the sign of g2 separates
/// trend chasers (> 0) from contrarians (< 0).
struct Institution {
  market::AgentId id{0};
  double cash{0.0};
  std::int64_t stock{0};

  double g1{0.0};
  double g2{0.0};
  double noise{0.0};
  int lookback{2};
  double entry_prob{1.0};
  int horizon{1};
  double risk_aversion{1.0};

  double max_leverage{1.0};
  bool short_allowed{false};
  double min_fraction{0.0};  // used only when short selling is allowed

  bool defaulted{false};
};

/// Horizon in ticks for a per-tick entry probability: ceil(1 / lambda).
[[nodiscard]] int horizon_for_entry_probability(double entry_prob);

/// What an entering agent sees of the market.
struct MarketView {
  double price{0.0};
  double fundamental{0.0};
  const PriceHistory* history{nullptr};
  double risk_free_rate{0.0};    // per tick
  double variance_floor{1e-8};   // per-tick return variance lower bound
  std::int64_t tick{0};
  double tick_size{0.01};

  // Capital rule; inactive when risk_metric is empty.
  std::optional<double> risk_metric;
  double capital_multiplier{1.0};
};

[[nodiscard]] double expected_return(const Institution& agent, const MarketView& view, double eps);
[[nodiscard]] double expected_price(double price, double expected_return);
[[nodiscard]] double wealth(const Institution& agent, double price) noexcept;
[[nodiscard]] bool is_technical_default(const Institution& agent, double price) noexcept;

/// Mean-variance optimum of E(r_c) - A/2 var(r_c) for a risky/risk-free
/// split, w* = excess / (A var), clamped to [min fraction, max leverage].
/// Throws std::invalid_argument for a non-positive variance.
[[nodiscard]] double optimal_risky_fraction(const Institution& agent, double excess_return, double variance);

/// Result of an agent's market entry, including diagnostics the engine logs.
struct OrderIntent {
  std::optional<market::Order> order;
  double expected_return{0.0};
  double expected_price{0.0};
  double risky_fraction{0.0};
  std::int64_t target_shares{0};
  std::int64_t desired_shares{0};  // before the capital rule
  bool capital_bound{false};
};

/// Translate the agent's expectation into at most one limit order: target
/// shares floor(w* W / limit), the capital rule if active, then the budget and
/// short-selling limits. The limit price is uniform between the current and
/// the expected price. Draws one normal and one uniform from `rng`, in that order.
[[nodiscard]] OrderIntent generate_order(const Institution& agent, const MarketView& view, Rng& rng);

/// Same, with the noise draw and price uniform supplied by the caller.
[[nodiscard]] OrderIntent generate_order(const Institution& agent, const MarketView& view, double eps,
                                         double price_uniform);

}  // namespace abm::agents
