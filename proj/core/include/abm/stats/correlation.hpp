#pragma once

#include <span>
#include <vector>

namespace abm::stats {

/// coeffs[k] for k = 0..K, r_0 = 1. Biased (1/N) autocovariances.
struct AcfResult {
  std::vector<double> coeffs;
  double bound{0.0};  // +-numSTD * SE
  std::size_t n{0};
};

/// SE(r_k) = sqrt((1 + 2 sum_{j<=q} r_j^2) / T). Throws if max_lag >= n or the
/// series is constant.
[[nodiscard]] AcfResult sample_acf(std::span<const double> x, int max_lag, double num_std = 2.0, int q = 0);

/// coeffs[K + k] holds lag k for k = -K..K; lag k > 0 pairs x_t with y_{t+k}.
struct CcfResult {
  std::vector<double> coeffs;
  int max_lag{0};
  double bound{0.0};
  std::size_t n{0};

  [[nodiscard]] double at(int lag) const { return coeffs.at(static_cast<std::size_t>(lag + max_lag)); }
};

[[nodiscard]] CcfResult sample_ccf(std::span<const double> x, std::span<const double> y, int max_lag,
                                   double num_std = 2.0);

/// corr(r_t, r_{t+tau}^2) for tau = -K..K.
[[nodiscard]] CcfResult leverage_corr(std::span<const double> returns, int max_lag);

[[nodiscard]] AcfResult volatility_clustering_acf(std::span<const double> returns, int max_lag);
[[nodiscard]] AcfResult long_memory_acf(std::span<const double> returns, int max_lag);

}  // namespace abm::stats
