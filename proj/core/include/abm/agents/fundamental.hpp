#pragma once

namespace abm::agents {

/// Exogenous fundamental value following a discretised geometric Brownian
/// motion: p' = p (1 + mu dt + sigma z sqrt(dt)), floored at `price_floor`.
struct FundamentalProcess {
  double price{100.0};
  double drift{0.0};       // per tick
  double volatility{0.0};  // per sqrt(tick)
  double price_floor{1e-8};

  /// Advance by `dt` ticks with standard normal draw `z`. Throws on dt <= 0.
  [[nodiscard]] FundamentalProcess step(double dt, double z) const;
};

}  // namespace abm::agents
