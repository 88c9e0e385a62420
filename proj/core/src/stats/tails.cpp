#include "abm/stats/tails.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace abm::stats {

double hill_estimator(std::span<const double> x, double tail_fraction, Tail side) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw std::invalid_argument("hill_estimator: tail fraction must lie in (0,1)");
  }
  const auto k = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(x.size())));
  if (k < 2) throw std::invalid_argument("hill_estimator: fewer than 2 tail observations");

  std::vector<double> v(x.begin(), x.end());
  if (side == Tail::left) {
    for (double& e : v) e = -e;
  }
  // Place the k+1 largest values first, the threshold at position k.
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), std::greater<>());
  const double threshold = v[k];
  if (!(threshold > 0.0)) throw std::invalid_argument("hill_estimator: threshold order statistic is not positive");
  const double log_t = std::log(threshold);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(v[i]) - log_t;
  if (!(s > 0.0)) throw std::invalid_argument("hill_estimator: tied tail, log spacings sum to zero");
  return static_cast<double>(k) / s;
}

HillPanel hill_panel(std::span<const double> x) {
  HillPanel panel{};
  for (std::size_t f = 0; f < kHillFractions.size(); ++f) {
    for (int s = 0; s < 2; ++s) {
      try {
        panel[f][static_cast<std::size_t>(s)] = hill_estimator(x, kHillFractions[f], s == 0 ? Tail::left : Tail::right);
      } catch (const std::invalid_argument&) {
      }
    }
  }
  return panel;
}

}  // namespace abm::stats
