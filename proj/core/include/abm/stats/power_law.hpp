#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace abm::stats {

struct PowerLawOptions {
  std::size_t min_tail{50};  // fewest points allowed above a candidate x_min
  // Upper limit on the x_min candidates scanned. When the data have more
  // eligible distinct values, an evenly spaced (by rank) subset is used.
  // 0 scans every distinct value.
  std::size_t max_candidates{100};
  int bootstrap_reps{100};  // resamples for the standard errors, 0 to skip
  std::uint64_t seed{1};
};

struct PowerLawFit {
  double zeta{0.0};
  double xmin{0.0};
  double ks{0.0};  // KS distance of the tail to the fitted law
  std::size_t n{0};
  std::size_t n_tail{0};
  double zeta_se{0.0};
  double xmin_se{0.0};
  std::optional<double> p_value;  // set by power_law_gof
};

/// Continuous MLE for a fixed lower bound: 1 + n / sum ln(x_i / xmin) over
/// x_i >= xmin.
[[nodiscard]] double power_law_mle(std::span<const double> x, double xmin);

/// x_min by KS minimisation, zeta by MLE on the tail, standard errors by
/// resampling with replacement. Throws when data are not all positive or no
/// candidate leaves min_tail points.
[[nodiscard]] PowerLawFit fit_power_law(std::span<const double> x, const PowerLawOptions& opts = {});

struct GofResult {
  double p_value{0.0};
  int n_synth{0};     // synthetic sets that were fitted
  bool few_sets{false};  // fewer than 100 synthetic sets requested
};

/// Semi-parametric bootstrap: each synthetic set takes body points from the
/// empirical values below x_min and tail points from the fitted law, is
/// re-fitted from scratch, and p is the fraction of synthetic KS distances
/// exceeding the observed one.
[[nodiscard]] GofResult power_law_gof(std::span<const double> x, const PowerLawFit& fit, int n_synth = 1000,
                                      const PowerLawOptions& opts = {});

}  // namespace abm::stats
