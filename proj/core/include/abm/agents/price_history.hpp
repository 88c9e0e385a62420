#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace abm::agents {

/// Per-tick market price history with running sums of log-returns, so the
/// chartist average and the return variance over any lookback are O(1).
class PriceHistory {
 public:
  PriceHistory() = default;
  explicit PriceHistory(std::size_t reserve);

  void push(double price);

  [[nodiscard]] std::size_t size() const noexcept { return log_prices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return log_prices_.empty(); }
  [[nodiscard]] double last_price() const;

  /// Mean of the last `lookback` one-tick log-returns.
  [[nodiscard]] double chartist_average(int lookback) const;
  /// Sample variance (n-1 denominator) of the last `lookback` log-returns.
  [[nodiscard]] double return_variance(int lookback) const;
  /// The last `count` one-tick log-returns, oldest first.
  [[nodiscard]] std::span<const double> recent_returns(std::size_t count) const;

 private:
  void require(std::size_t returns) const;

  std::vector<double> log_prices_;
  std::vector<double> returns_;
  std::vector<double> cum_returns_{0.0};
  std::vector<double> cum_squares_{0.0};
};

/// Direct form of the chartist rule: (1/L) sum_{j=1..L} log(p[t-j] / p[t-j-1])
/// over the last L+1 entries of `prices`. Throws std::invalid_argument when
/// the history is shorter than L+1 or a price is not positive.
[[nodiscard]] double chartist_average(std::span<const double> prices, int lookback);

}  // namespace abm::agents
