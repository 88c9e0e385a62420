#include "abm/agents/institution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "abm/regulation/risk.hpp"

namespace abm::agents {

int horizon_for_entry_probability(double entry_prob) {
  if (!(entry_prob > 0.0 && entry_prob <= 1.0)) {
    throw std::invalid_argument("entry probability must lie in (0,1]");
  }
  // 1/0.1 evaluates to 10.000000000000002; don't let that round up to 11.
  return static_cast<int>(std::ceil(1.0 / entry_prob - 1e-9));
}

double expected_return(const Institution& agent, const MarketView& view, double eps) {
  if (!(view.price > 0.0) || !(view.fundamental > 0.0)) {
    throw std::invalid_argument("expected_return: prices must be positive");
  }
  double chartist = 0.0;
  if (agent.g2 != 0.0) {
    if (view.history == nullptr) throw std::invalid_argument("expected_return: chartist weight needs a price history");
    chartist = view.history->chartist_average(agent.lookback);
  }
  return agent.g1 * std::log(view.fundamental / view.price) + agent.g2 * chartist + agent.noise * eps;
}

double expected_price(double price, double expected_return) { return price * std::exp(expected_return); }

double wealth(const Institution& agent, double price) noexcept {
  return agent.cash + static_cast<double>(agent.stock) * price;
}

bool is_technical_default(const Institution& agent, double price) noexcept { return wealth(agent, price) < 0.0; }

double optimal_risky_fraction(const Institution& agent, double excess_return, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("optimal_risky_fraction: variance must be positive");
  const double w = excess_return / (agent.risk_aversion * variance);
  const double lo = agent.short_allowed ? std::min(0.0, agent.min_fraction) : 0.0;
  const double hi = std::max(0.0, agent.max_leverage);
  return std::clamp(w, lo, hi);
}

OrderIntent generate_order(const Institution& agent, const MarketView& view, Rng& rng) {
  const double eps = standard_normal(rng);
  const double u = rng.uniform();
  return generate_order(agent, view, eps, u);
}

OrderIntent generate_order(const Institution& agent, const MarketView& view, double eps, double price_uniform) {
  OrderIntent intent;
  const double p = view.price;
  intent.expected_return = expected_return(agent, view, eps);
  intent.expected_price = expected_price(p, intent.expected_return);

  double variance = view.variance_floor;
  if (view.history != nullptr && agent.lookback >= 2) {
    variance = std::max(variance, view.history->return_variance(agent.lookback));
  }
  const double tau = static_cast<double>(agent.horizon);
  const double rf_horizon = std::pow(1.0 + view.risk_free_rate, tau) - 1.0;
  intent.risky_fraction = optimal_risky_fraction(agent, intent.expected_return - rf_horizon, variance * tau);

  double limit = p + price_uniform * (intent.expected_price - p);
  limit = std::max(limit, view.tick_size);

  const double w = wealth(agent, p);
  if (!(w > 0.0)) return intent;

  const double target = std::trunc(intent.risky_fraction * w / limit);
  intent.desired_shares = static_cast<std::int64_t>(target);
  intent.target_shares = intent.desired_shares;
  if (view.risk_metric) {
    intent.target_shares = regulation::apply_capital_constraint(intent.desired_shares, w, p, *view.risk_metric,
                                                                view.capital_multiplier);
    intent.capital_bound = intent.target_shares != intent.desired_shares;
  }

  std::int64_t quantity = intent.target_shares - agent.stock;
  market::Side side = market::Side::buy;
  if (quantity > 0) {
    // Cash may go negative only down to -(leverage - 1) * W.
    const double spendable = agent.cash + std::max(0.0, agent.max_leverage - 1.0) * w;
    const double affordable = spendable > 0.0 ? std::floor(spendable / limit) : 0.0;
    quantity = std::min<std::int64_t>(quantity, static_cast<std::int64_t>(std::min(affordable, 1e15)));
  } else if (quantity < 0) {
    side = market::Side::sell;
    quantity = -quantity;
    if (!agent.short_allowed) quantity = std::min(quantity, std::max<std::int64_t>(0, agent.stock));
  }
  if (quantity <= 0) return intent;

  intent.order = market::Order{agent.id, side, quantity, limit, view.tick};
  return intent;
}

}  // namespace abm::agents
