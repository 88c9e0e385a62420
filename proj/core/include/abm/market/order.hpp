#pragma once

#include <cstdint>
#include <string_view>

namespace abm::market {

using AgentId = std::uint32_t;

enum class Side : std::uint8_t { buy, sell };

constexpr std::string_view to_string(Side s) noexcept { return s == Side::buy ? "buy" : "sell"; }

// A limit order. Prices are in currency per share, quantities in shares.
struct Order {
  AgentId agent_id{0};
  Side side{Side::buy};
  std::int64_t quantity{0};
  double limit_price{0.0};
  std::int64_t submit_tick{0};
};

// Executions always print at the resting order's limit price.
struct Trade {
  std::int64_t tick{0};
  double price{0.0};
  std::int64_t quantity{0};
  AgentId buyer_id{0};
  AgentId seller_id{0};

  friend bool operator==(const Trade&, const Trade&) = default;
};

}  // namespace abm::market
