#pragma once

#include <array>
#include <optional>
#include <span>

namespace abm::stats {

enum class Tail { left, right };

/// Hill tail index on the k = floor(fraction * n) largest values of the
/// chosen side (the left tail is the right tail of -x). Throws if k < 2, if
/// the threshold order statistic is not positive, or if the log spacings sum
/// to zero.
[[nodiscard]] double hill_estimator(std::span<const double> x, double tail_fraction, Tail side);

inline constexpr std::array<double, 4> kHillFractions{0.01, 0.025, 0.05, 0.10};

/// [fraction][0 = left, 1 = right]; entries the estimator rejects are empty.
using HillPanel = std::array<std::array<std::optional<double>, 2>, kHillFractions.size()>;

[[nodiscard]] HillPanel hill_panel(std::span<const double> x);

}  // namespace abm::stats
