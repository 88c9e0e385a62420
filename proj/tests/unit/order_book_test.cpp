#include <gtest/gtest.h>

#include "abm/market/order_book.hpp"
#include "oracles.hpp"

using abm::market::LimitOrderBook;
using abm::market::Order;
using abm::market::Side;
using abm::market::Trade;

namespace {

Order make(abm::market::AgentId id, Side side, std::int64_t qty, double price, std::int64_t tick = 0) {
  return Order{id, side, qty, price, tick};
}

}  // namespace

TEST(OrderBook, EmptyBookBuyRests) {
  LimitOrderBook book;
  EXPECT_TRUE(book.submit(make(1, Side::buy, 10, 100.0)).empty());
  ASSERT_TRUE(book.best_bid());
  EXPECT_DOUBLE_EQ(*book.best_bid(), 100.0);
  EXPECT_FALSE(book.best_ask());
  EXPECT_EQ(book.bid_depth(), 10);
}

TEST(OrderBook, TradesAtRestingPrice) {
  LimitOrderBook book;
  book.submit(make(1, Side::sell, 5, 99.0, 1));
  const auto trades = book.submit(make(2, Side::buy, 5, 100.0, 2));
  ASSERT_EQ(trades.size(), 1u);
  EXPECT_DOUBLE_EQ(trades[0].price, 99.0);
  EXPECT_EQ(trades[0].quantity, 5);
  EXPECT_EQ(trades[0].buyer_id, 2u);
  EXPECT_EQ(trades[0].seller_id, 1u);
  EXPECT_EQ(book.resting_count(), 0u);
}

TEST(OrderBook, FifoWithinLevel) {
  LimitOrderBook book;
  book.submit(make(1, Side::sell, 3, 99.0, 1));
  book.submit(make(2, Side::sell, 3, 99.0, 2));
  const auto trades = book.submit(make(3, Side::buy, 4, 99.0, 3));
  ASSERT_EQ(trades.size(), 2u);
  EXPECT_EQ(trades[0].seller_id, 1u);
  EXPECT_EQ(trades[0].quantity, 3);
  EXPECT_EQ(trades[1].seller_id, 2u);
  EXPECT_EQ(trades[1].quantity, 1);
  const auto rest = book.resting_order(2);
  ASSERT_TRUE(rest);
  EXPECT_EQ(rest->quantity, 2);
  EXPECT_EQ(book.ask_depth(), 2);
}

TEST(OrderBook, NewOrderSupersedesOld) {
  LimitOrderBook book;
  book.submit(make(7, Side::buy, 5, 98.0));
  book.submit(make(7, Side::buy, 5, 97.0));
  EXPECT_EQ(book.resting_count(), 1u);
  EXPECT_DOUBLE_EQ(*book.best_bid(), 97.0);
  EXPECT_EQ(book.bid_depth(), 5);
}

TEST(OrderBook, NoSelfTrade) {
  LimitOrderBook book;
  book.submit(make(1, Side::sell, 5, 99.0));
  EXPECT_TRUE(book.submit(make(1, Side::buy, 5, 100.0)).empty());
  EXPECT_FALSE(book.best_ask());
  EXPECT_DOUBLE_EQ(*book.best_bid(), 100.0);
}

TEST(OrderBook, RejectsInvalidOrders) {
  LimitOrderBook book;
  EXPECT_THROW(book.submit(make(1, Side::buy, 0, 100.0)), std::invalid_argument);
  EXPECT_THROW(book.submit(make(1, Side::buy, 1, 0.0)), std::invalid_argument);
  EXPECT_THROW(book.submit(make(1, Side::sell, 1, -3.0)), std::invalid_argument);
}

TEST(OrderBook, PriceProxyChain) {
  LimitOrderBook book;
  EXPECT_FALSE(book.current_price());
  book.set_reference_price(100.0);
  EXPECT_DOUBLE_EQ(*book.current_price(), 100.0);
  book.submit(make(1, Side::buy, 1, 100.5));
  EXPECT_DOUBLE_EQ(*book.current_price(), 100.5);
  book.submit(make(2, Side::sell, 1, 101.0));
  book.submit(make(3, Side::buy, 1, 101.0));
  EXPECT_DOUBLE_EQ(*book.current_price(), 101.0);
}

TEST(OrderBook, Spread) {
  LimitOrderBook book;
  EXPECT_FALSE(book.spread());
  book.submit(make(1, Side::sell, 1, 10.05));
  EXPECT_FALSE(book.spread());
  book.submit(make(2, Side::buy, 1, 10.00));
  EXPECT_NEAR(*book.spread(), 0.05, 1e-12);

  LimitOrderBook b2;
  b2.submit(make(1, Side::sell, 1, 100.0));
  b2.submit(make(2, Side::buy, 1, 99.0));
  EXPECT_DOUBLE_EQ(*b2.spread(), 1.0);
}

TEST(OrderBook, GridSnapping) {
  LimitOrderBook book(0.01);
  book.submit(make(1, Side::buy, 1, 10.009));
  book.submit(make(2, Side::sell, 1, 10.011));
  EXPECT_DOUBLE_EQ(*book.best_bid(), 10.00);
  EXPECT_DOUBLE_EQ(*book.best_ask(), 10.02);
}

TEST(OrderBook, MatchesBruteForceAndKeepsInvariants) {
  abm::Rng rng(42);
  LimitOrderBook book(0.01);
  oracle::BruteForceBook ref(0.01);
  std::int64_t bought = 0, sold = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto agent = static_cast<abm::market::AgentId>(rng.below(60));
    const Side side = rng.below(2) ? Side::buy : Side::sell;
    const auto qty = static_cast<std::int64_t>(1 + rng.below(20));
    const auto ticks = static_cast<std::int64_t>(9950 + rng.below(101));
    const auto got = book.submit(make(agent, side, qty, static_cast<double>(ticks) * 0.01, i));
    const auto want = ref.submit(agent, side, qty, ticks, i);
    ASSERT_EQ(got, want) << "order " << i;
    for (const auto& t : got) {
      EXPECT_NE(t.buyer_id, t.seller_id);
      EXPECT_LE(t.quantity, qty);
      bought += t.quantity;
      sold += t.quantity;
    }
    if (book.best_bid() && book.best_ask()) ASSERT_LT(*book.best_bid(), *book.best_ask());
    ASSERT_EQ(book.resting_count(), ref.entries().size());
  }
  EXPECT_EQ(bought, sold);
}

TEST(OrderBook, DeterministicReplay) {
  auto replay = [] {
    abm::Rng rng(9);
    LimitOrderBook book;
    std::vector<Trade> all;
    for (int i = 0; i < 2000; ++i) {
      const auto agent = static_cast<abm::market::AgentId>(rng.below(30));
      const Side side = rng.below(2) ? Side::buy : Side::sell;
      book.submit(make(agent, side, 1 + static_cast<std::int64_t>(rng.below(9)), 99.0 + 0.01 * static_cast<double>(rng.below(200)), i),
                  all);
    }
    return all;
  };
  EXPECT_EQ(replay(), replay());
}

TEST(OrderBook, Cancel) {
  LimitOrderBook book;
  book.submit(make(4, Side::sell, 3, 50.0));
  EXPECT_TRUE(book.cancel(4));
  EXPECT_FALSE(book.cancel(4));
  EXPECT_EQ(book.ask_depth(), 0);
}
