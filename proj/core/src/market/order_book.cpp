#include "abm/market/order_book.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abm::market {

namespace {

// Guards against 100.00/0.01 landing a hair below 10000.
constexpr double kGridSlack = 1e-9;

}  // namespace

LimitOrderBook::LimitOrderBook(double tick_size) : tick_size_(tick_size) {
  if (!(tick_size > 0.0) || !std::isfinite(tick_size)) {
    throw std::invalid_argument("LimitOrderBook: tick size must be positive");
  }
}

std::int64_t LimitOrderBook::to_ticks(double price, Side side) const {
  const double units = price / tick_size_;
  const double snapped = side == Side::buy ? std::floor(units + kGridSlack) : std::ceil(units - kGridSlack);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(snapped));
}

std::vector<Trade> LimitOrderBook::submit(const Order& order) {
  std::vector<Trade> trades;
  submit(order, trades);
  return trades;
}

void LimitOrderBook::submit(const Order& order, std::vector<Trade>& out) {
  if (order.quantity <= 0) {
    throw std::invalid_argument("LimitOrderBook::submit: quantity must be >= 1");
  }
  if (!(order.limit_price > 0.0) || !std::isfinite(order.limit_price)) {
    throw std::invalid_argument("LimitOrderBook::submit: limit price must be positive");
  }

  cancel(order.agent_id);

  Order incoming = order;
  const std::int64_t limit_ticks = to_ticks(order.limit_price, order.side);
  if (order.side == Side::buy) {
    match(incoming, limit_ticks, asks_, out);
  } else {
    match(incoming, limit_ticks, bids_, out);
  }
  if (incoming.quantity > 0) {
    rest(incoming, limit_ticks);
  }
}

template <typename Book>
void LimitOrderBook::match(Order& incoming, std::int64_t limit_ticks, Book& opposite,
                           std::vector<Trade>& out) {
  const bool is_buy = incoming.side == Side::buy;
  while (incoming.quantity > 0 && !opposite.empty()) {
    auto level_it = opposite.begin();
    const std::int64_t level_ticks = level_it->first;
    const bool crosses = is_buy ? limit_ticks >= level_ticks : limit_ticks <= level_ticks;
    if (!crosses) break;

    Level& level = level_it->second;
    while (incoming.quantity > 0 && !level.empty()) {
      Resting& resting = level.front();
      const std::int64_t qty = std::min(incoming.quantity, resting.order.quantity);
      const double price = to_price(level_ticks);

      Trade trade;
      trade.tick = incoming.submit_tick;
      trade.price = price;
      trade.quantity = qty;
      trade.buyer_id = is_buy ? incoming.agent_id : resting.order.agent_id;
      trade.seller_id = is_buy ? resting.order.agent_id : incoming.agent_id;
      out.push_back(trade);
      last_trade_price_ = price;

      incoming.quantity -= qty;
      resting.order.quantity -= qty;
      (is_buy ? ask_depth_ : bid_depth_) -= qty;
      if (resting.order.quantity == 0) {
        index_.erase(resting.order.agent_id);
        level.pop_front();
      }
    }
    if (level.empty()) opposite.erase(level_it);
  }
}

void LimitOrderBook::rest(const Order& order, std::int64_t limit_ticks) {
  Level* level = nullptr;
  if (order.side == Side::buy) {
    level = &bids_[limit_ticks];
    bid_depth_ += order.quantity;
  } else {
    level = &asks_[limit_ticks];
    ask_depth_ += order.quantity;
  }
  level->push_back(Resting{order, limit_ticks});
  index_[order.agent_id] = Locator{order.side, limit_ticks, std::prev(level->end())};
  last_quote_price_ = to_price(limit_ticks);
}

bool LimitOrderBook::cancel(AgentId agent) {
  auto found = index_.find(agent);
  if (found == index_.end()) return false;
  const Locator loc = found->second;
  index_.erase(found);

  auto drop = [&](auto& book, std::int64_t& depth) {
    auto level_it = book.find(loc.price_ticks);
    depth -= loc.it->order.quantity;
    level_it->second.erase(loc.it);
    if (level_it->second.empty()) book.erase(level_it);
  };
  if (loc.side == Side::buy) {
    drop(bids_, bid_depth_);
  } else {
    drop(asks_, ask_depth_);
  }
  return true;
}

std::optional<double> LimitOrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return to_price(bids_.begin()->first);
}

std::optional<double> LimitOrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return to_price(asks_.begin()->first);
}

std::optional<double> LimitOrderBook::spread() const {
  if (bids_.empty() || asks_.empty()) return std::nullopt;
  return to_price(asks_.begin()->first - bids_.begin()->first);
}

std::optional<double> LimitOrderBook::current_price() const {
  if (last_trade_price_) return last_trade_price_;
  if (last_quote_price_) return last_quote_price_;
  return reference_price_;
}

void LimitOrderBook::set_reference_price(double price) {
  if (!(price > 0.0)) throw std::invalid_argument("LimitOrderBook: reference price must be positive");
  reference_price_ = price;
}

std::optional<Order> LimitOrderBook::resting_order(AgentId agent) const {
  auto found = index_.find(agent);
  if (found == index_.end()) return std::nullopt;
  return found->second.it->order;
}

}  // namespace abm::market
