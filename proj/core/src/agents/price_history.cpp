#include "abm/agents/price_history.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace abm::agents {

PriceHistory::PriceHistory(std::size_t reserve) {
  log_prices_.reserve(reserve);
  returns_.reserve(reserve);
  cum_returns_.reserve(reserve + 1);
  cum_squares_.reserve(reserve + 1);
}

void PriceHistory::push(double price) {
  if (!(price > 0.0)) throw std::invalid_argument("PriceHistory::push: price must be positive");
  const double lp = std::log(price);
  if (!log_prices_.empty()) {
    const double r = lp - log_prices_.back();
    returns_.push_back(r);
    cum_returns_.push_back(cum_returns_.back() + r);
    cum_squares_.push_back(cum_squares_.back() + r * r);
  }
  log_prices_.push_back(lp);
}

double PriceHistory::last_price() const {
  if (log_prices_.empty()) throw std::logic_error("PriceHistory::last_price on empty history");
  return std::exp(log_prices_.back());
}

void PriceHistory::require(std::size_t returns) const {
  if (returns_.size() < returns) {
    throw std::invalid_argument("PriceHistory: need " + std::to_string(returns + 1) + " prices, have " +
                                std::to_string(log_prices_.size()) + " (warm-up incomplete)");
  }
}

double PriceHistory::chartist_average(int lookback) const {
  if (lookback < 1) throw std::invalid_argument("chartist lookback must be >= 1");
  const auto L = static_cast<std::size_t>(lookback);
  require(L);
  const std::size_t n = returns_.size();
  return (cum_returns_[n] - cum_returns_[n - L]) / static_cast<double>(L);
}

double PriceHistory::return_variance(int lookback) const {
  if (lookback < 2) throw std::invalid_argument("variance lookback must be >= 2");
  const auto L = static_cast<std::size_t>(lookback);
  require(L);
  const std::size_t n = returns_.size();
  const double s1 = cum_returns_[n] - cum_returns_[n - L];
  const double s2 = cum_squares_[n] - cum_squares_[n - L];
  const double Ld = static_cast<double>(L);
  return std::max(0.0, (s2 - s1 * s1 / Ld) / (Ld - 1.0));
}

std::span<const double> PriceHistory::recent_returns(std::size_t count) const {
  require(count);
  return std::span<const double>(returns_).last(count);
}

double chartist_average(std::span<const double> prices, int lookback) {
  if (lookback < 1) throw std::invalid_argument("chartist lookback must be >= 1");
  const auto L = static_cast<std::size_t>(lookback);
  if (prices.size() < L + 1) {
    throw std::invalid_argument("chartist_average: history shorter than lookback + 1 (warm-up incomplete)");
  }
  const std::size_t t = prices.size();
  double sum = 0.0;
  for (std::size_t j = 1; j <= L; ++j) {
    const double newer = prices[t - j];
    const double older = prices[t - j - 1];
    if (!(newer > 0.0) || !(older > 0.0)) throw std::invalid_argument("chartist_average: non-positive price");
    sum += std::log(newer / older);
  }
  return sum / static_cast<double>(L);
}

}  // namespace abm::agents
