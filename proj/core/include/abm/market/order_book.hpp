#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "abm/market/order.hpp"

namespace abm::market {

/// Continuous double auction with price/time priority.
///
/// Each agent has at most one resting order: a new submission from the same
/// agent removes the old one before matching, so an agent can never trade
/// against itself. Limit prices are snapped onto the tick grid (buys round
/// down, sells round up) and the residual of a partially filled order rests.
class LimitOrderBook {
 public:
  explicit LimitOrderBook(double tick_size = 0.01);

  /// Match `order` against the opposite side and rest any residual.
  /// Trades are appended to `out` in execution order. Throws
  /// std::invalid_argument on a non-positive quantity or price.
  void submit(const Order& order, std::vector<Trade>& out);
  [[nodiscard]] std::vector<Trade> submit(const Order& order);

  /// Remove the agent's resting order, if any. Returns true when one existed.
  bool cancel(AgentId agent);

  [[nodiscard]] std::optional<double> best_bid() const;
  [[nodiscard]] std::optional<double> best_ask() const;

  /// Best ask minus best bid; empty when either side has no orders.
  [[nodiscard]] std::optional<double> spread() const;

  /// Price proxy: last trade, else last quoted (rested) price, else the
  /// reference price seeded by the caller. Empty only if nothing was ever set.
  [[nodiscard]] std::optional<double> current_price() const;
  void set_reference_price(double price);

  [[nodiscard]] std::optional<double> last_trade_price() const { return last_trade_price_; }
  [[nodiscard]] std::optional<double> last_quote_price() const { return last_quote_price_; }

  [[nodiscard]] std::int64_t bid_depth() const noexcept { return bid_depth_; }
  [[nodiscard]] std::int64_t ask_depth() const noexcept { return ask_depth_; }
  [[nodiscard]] std::size_t resting_count() const noexcept { return index_.size(); }
  [[nodiscard]] std::optional<Order> resting_order(AgentId agent) const;

  [[nodiscard]] double tick_size() const noexcept { return tick_size_; }
  [[nodiscard]] std::int64_t to_ticks(double price, Side side) const;
  [[nodiscard]] double to_price(std::int64_t ticks) const noexcept {
    return static_cast<double>(ticks) * tick_size_;
  }

 private:
  struct Resting {
    Order order;
    std::int64_t price_ticks;
  };
  using Level = std::list<Resting>;
  using BidMap = std::map<std::int64_t, Level, std::greater<>>;
  using AskMap = std::map<std::int64_t, Level, std::less<>>;

  struct Locator {
    Side side;
    std::int64_t price_ticks;
    Level::iterator it;
  };

  template <typename Book>
  void match(Order& incoming, std::int64_t limit_ticks, Book& opposite, std::vector<Trade>& out);
  void rest(const Order& order, std::int64_t limit_ticks);

  double tick_size_;
  BidMap bids_;
  AskMap asks_;
  std::unordered_map<AgentId, Locator> index_;
  std::int64_t bid_depth_{0};
  std::int64_t ask_depth_{0};
  std::optional<double> last_trade_price_;
  std::optional<double> last_quote_price_;
  std::optional<double> reference_price_;
};

}  // namespace abm::market
