#include "abm/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace abm::stats {

namespace {

std::vector<double> demeaned(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - mean;
  return d;
}

bool constant(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *lo == *hi;
}

double dot_shift(const std::vector<double>& a, const std::vector<double>& b, std::size_t k) {
  double s = 0.0;
  for (std::size_t t = 0; t + k < a.size(); ++t) s += a[t] * b[t + k];
  return s;
}

}  // namespace

AcfResult sample_acf(std::span<const double> x, int max_lag, double num_std, int q) {
  if (max_lag < 0) throw std::invalid_argument("sample_acf: negative lag");
  if (static_cast<std::size_t>(max_lag) >= x.size()) {
    throw std::invalid_argument("sample_acf: max lag " + std::to_string(max_lag) + " not below length " +
                                std::to_string(x.size()));
  }
  if (q < 0 || q > max_lag) throw std::invalid_argument("sample_acf: q must lie in [0, max_lag]");
  if (constant(x)) throw std::invalid_argument("sample_acf: zero-variance series");
  const auto d = demeaned(x);
  const double c0 = dot_shift(d, d, 0);
  if (!(c0 > 0.0)) throw std::invalid_argument("sample_acf: zero-variance series");

  AcfResult out;
  out.n = x.size();
  out.coeffs.resize(static_cast<std::size_t>(max_lag) + 1);
  out.coeffs[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) out.coeffs[static_cast<std::size_t>(k)] = dot_shift(d, d, k) / c0;

  double s = 1.0;
  for (int j = 1; j <= q; ++j) s += 2.0 * out.coeffs[static_cast<std::size_t>(j)] * out.coeffs[static_cast<std::size_t>(j)];
  out.bound = num_std * std::sqrt(s / static_cast<double>(x.size()));
  return out;
}

CcfResult sample_ccf(std::span<const double> x, std::span<const double> y, int max_lag, double num_std) {
  if (x.size() != y.size()) throw std::invalid_argument("sample_ccf: length mismatch");
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= x.size()) {
    throw std::invalid_argument("sample_ccf: max lag must lie in [0, n)");
  }
  if (constant(x) || constant(y)) throw std::invalid_argument("sample_ccf: constant input");
  const auto dx = demeaned(x);
  const auto dy = demeaned(y);
  const double cxx = dot_shift(dx, dx, 0);
  const double cyy = dot_shift(dy, dy, 0);
  if (!(cxx > 0.0) || !(cyy > 0.0)) throw std::invalid_argument("sample_ccf: constant input");
  // The 1/N factors cancel in the ratio.
  const double norm = std::sqrt(cxx * cyy);

  CcfResult out;
  out.max_lag = max_lag;
  out.n = x.size();
  out.coeffs.resize(2 * static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    out.coeffs[static_cast<std::size_t>(max_lag + k)] = dot_shift(dx, dy, uk) / norm;
    out.coeffs[static_cast<std::size_t>(max_lag - k)] = dot_shift(dy, dx, uk) / norm;
  }
  out.bound = num_std / std::sqrt(static_cast<double>(x.size()));
  return out;
}

CcfResult leverage_corr(std::span<const double> returns, int max_lag) {
  if (returns.size() <= 2 * static_cast<std::size_t>(std::max(max_lag, 0))) {
    throw std::invalid_argument("leverage_corr: series shorter than 2K+1");
  }
  std::vector<double> sq(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) sq[i] = returns[i] * returns[i];
  return sample_ccf(returns, sq, max_lag);
}

AcfResult volatility_clustering_acf(std::span<const double> returns, int max_lag) {
  std::vector<double> sq(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) sq[i] = returns[i] * returns[i];
  return sample_acf(sq, max_lag);
}

AcfResult long_memory_acf(std::span<const double> returns, int max_lag) {
  std::vector<double> a(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) a[i] = std::abs(returns[i]);
  return sample_acf(a, max_lag);
}

}  // namespace abm::stats
