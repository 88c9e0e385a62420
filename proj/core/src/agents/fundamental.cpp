#include "abm/agents/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abm::agents {

FundamentalProcess FundamentalProcess::step(double dt, double z) const {
  if (!(dt > 0.0)) throw std::invalid_argument("FundamentalProcess::step: dt must be positive");
  FundamentalProcess next = *this;
  next.price = std::max(price_floor, price * (1.0 + drift * dt + volatility * z * std::sqrt(dt)));
  return next;
}

}  // namespace abm::agents
