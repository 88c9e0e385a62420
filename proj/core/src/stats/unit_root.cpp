#include "abm/stats/unit_root.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "df_tables.hpp"

namespace abm::stats {

namespace {

struct Ols {
  std::vector<double> beta;
  std::vector<double> resid;
  std::vector<std::vector<double>> xtx_inv;
  double s2{0.0};  // residual variance, n - k denominator
};

// cols[j][t] is regressor j at observation t.
Ols ols(const std::vector<std::vector<double>>& cols, const std::vector<double>& y) {
  const std::size_t k = cols.size(), n = y.size();
  if (n <= k) throw std::invalid_argument("unit-root test: not enough observations");
  // Augmented [X'X | I | X'y], reduced by Gauss-Jordan with partial pivoting.
  std::vector<std::vector<double>> a(k, std::vector<double>(2 * k + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < n; ++t) s += cols[i][t] * cols[j][t];
      a[i][j] = s;
    }
    a[i][k + i] = 1.0;
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += cols[i][t] * y[t];
    a[i][2 * k] = s;
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::abs(a[i][i]));
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (!(std::abs(a[piv][c]) > 1e-12 * scale)) throw std::invalid_argument("unit-root test: degenerate regressors");
    std::swap(a[c], a[piv]);
    const double d = a[c][c];
    for (double& v : a[c]) v /= d;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= 2 * k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  Ols out;
  out.beta.resize(k);
  out.xtx_inv.assign(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    out.beta[i] = a[i][2 * k];
    for (std::size_t j = 0; j < k; ++j) out.xtx_inv[i][j] = a[i][k + j];
  }
  out.resid.resize(n);
  double ss = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double fit = 0.0;
    for (std::size_t j = 0; j < k; ++j) fit += out.beta[j] * cols[j][t];
    out.resid[t] = y[t] - fit;
    ss += out.resid[t] * out.resid[t];
  }
  out.s2 = ss / static_cast<double>(n - k);
  return out;
}

void add_deterministic(std::vector<std::vector<double>>& cols, Deterministic det, std::size_t n) {
  if (det == Deterministic::none) return;
  cols.emplace_back(n, 1.0);
  if (det == Deterministic::trend) {
    // Scaled time index; the statistics of interest do not depend on the scale.
    std::vector<double> tr(n);
    for (std::size_t t = 0; t < n; ++t) tr[t] = static_cast<double>(t + 1) / static_cast<double>(n);
    cols.push_back(std::move(tr));
  }
}

void check_input(std::span<const double> y) {
  if (y.size() < 30) throw std::invalid_argument("unit-root test: need at least 30 observations");
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("unit-root test: non-finite value");
  }
}

const double (*table_for(Deterministic det))[detail::kDfProbs.size()] {
  switch (det) {
    case Deterministic::constant: return detail::kConstantTable;
    case Deterministic::trend: return detail::kTrendTable;
    case Deterministic::none: break;
  }
  return detail::kNoneTable;
}

// Response-surface coefficients for the 1%, 5% and 10% points,
// cv = b0 + b1/T + b2/T^2 + b3/T^3.
constexpr double kSurface[3][3][4] = {
    {{-2.56574, -2.2358, -3.627, 0.0}, {-1.94100, -0.2686, -3.365, 31.223}, {-1.61682, 0.2656, -2.714, 25.364}},
    {{-3.43035, -6.5393, -16.786, -79.433}, {-2.86154, -2.8903, -4.234, -40.040}, {-2.56677, -1.5384, -2.809, 0.0}},
    {{-3.95877, -9.0531, -28.428, -134.155}, {-3.41049, -4.3904, -9.036, -45.374}, {-3.12705, -2.5856, -3.925, -22.380}},
};

// Column of the simulated table interpolated linearly in 1/T, clamped to
// the tabulated sizes.
double table_value(Deterministic det, std::size_t col, double nobs) {
  const auto* table = table_for(det);
  const auto& sizes = detail::kDfSizes;
  if (nobs <= sizes.front()) return table[0][col];
  if (nobs >= sizes.back()) return table[sizes.size() - 1][col];
  std::size_t i = 1;
  while (sizes[i] < nobs) ++i;
  const double x0 = 1.0 / sizes[i - 1], x1 = 1.0 / sizes[i], x = 1.0 / nobs;
  const double w = (x - x0) / (x1 - x0);
  return table[i - 1][col] + w * (table[i][col] - table[i - 1][col]);
}

std::vector<double> critical_row(Deterministic det, double nobs) {
  std::vector<double> row(detail::kDfProbs.size());
  const auto m = static_cast<std::size_t>(det);
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double p = detail::kDfProbs[c];
    int s = -1;
    if (p == 0.01) s = 0;
    if (p == 0.05) s = 1;
    if (p == 0.10) s = 2;
    if (s >= 0) {
      const double* b = kSurface[m][s];
      const double inv = 1.0 / nobs;
      row[c] = b[0] + inv * (b[1] + inv * (b[2] + inv * b[3]));
    } else {
      row[c] = table_value(det, c, nobs);
    }
  }
  return row;
}

double interpolate_p(const std::vector<double>& cv, const double* probs, double stat, bool* clipped) {
  const std::size_t n = cv.size();
  if (clipped) *clipped = false;
  if (stat <= cv.front()) {
    if (clipped) *clipped = true;
    return probs[0];
  }
  if (stat >= cv.back()) {
    if (clipped) *clipped = true;
    return probs[n - 1];
  }
  std::size_t i = 1;
  while (cv[i] < stat) ++i;
  const double w = (stat - cv[i - 1]) / (cv[i] - cv[i - 1]);
  return probs[i - 1] + w * (probs[i] - probs[i - 1]);
}

UnitRootResult df_result(Deterministic det, double stat, std::size_t nobs, int lags) {
  UnitRootResult r;
  r.statistic = stat;
  r.nobs = nobs;
  r.lags = lags;
  r.critical_value = df_critical_value(det, 0.05, static_cast<double>(nobs));
  r.p_value = df_p_value(det, stat, static_cast<double>(nobs), &r.p_clipped);
  r.reject = stat < r.critical_value;
  return r;
}

// Regression of y_t on deterministic terms and y_{t-1}; returns the t
// statistic of (a - 1) and the pieces the PP correction needs.
struct ArFit {
  double t{0.0};
  double se{0.0};
  Ols fit;
};

ArFit ar_regression(std::span<const double> y, Deterministic det) {
  const std::size_t n = y.size() - 1;
  std::vector<std::vector<double>> cols;
  add_deterministic(cols, det, n);
  cols.emplace_back(y.begin(), y.end() - 1);
  std::vector<double> dep(y.begin() + 1, y.end());
  ArFit out{0.0, 0.0, ols(cols, dep)};
  const std::size_t k = cols.size() - 1;
  out.se = std::sqrt(out.fit.s2 * out.fit.xtx_inv[k][k]);
  if (!(out.se > 0.0)) throw std::invalid_argument("unit-root test: degenerate regressors");
  out.t = (out.fit.beta[k] - 1.0) / out.se;
  return out;
}

// Bartlett-weighted long-run variance of e with `lags` autocovariances.
double long_run_variance(const std::vector<double>& e, int lags, double& gamma0) {
  const auto n = static_cast<double>(e.size());
  auto gamma = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t t = j; t < e.size(); ++t) s += e[t] * e[t - j];
    return s / n;
  };
  gamma0 = gamma(0);
  double lr = gamma0;
  for (int j = 1; j <= lags; ++j) {
    lr += 2.0 * (1.0 - j / (lags + 1.0)) * gamma(static_cast<std::size_t>(j));
  }
  return lr;
}

}  // namespace

double df_critical_value(Deterministic det, double p, double nobs) {
  const auto& probs = detail::kDfProbs;
  const auto row = critical_row(det, nobs);
  if (p <= probs.front()) return row.front();
  if (p >= probs.back()) return row.back();
  std::size_t i = 1;
  while (probs[i] < p) ++i;
  const double w = (p - probs[i - 1]) / (probs[i] - probs[i - 1]);
  return row[i - 1] + w * (row[i] - row[i - 1]);
}

double df_p_value(Deterministic det, double statistic, double nobs, bool* clipped) {
  return interpolate_p(critical_row(det, nobs), detail::kDfProbs.data(), statistic, clipped);
}

UnitRootResult adf_test(std::span<const double> y, Deterministic det, int lags) {
  check_input(y);
  if (lags < 0) throw std::invalid_argument("adf_test: negative lag count");
  if (lags == 0) {
    const auto fit = ar_regression(y, det);
    return df_result(det, fit.t, y.size() - 1, 0);
  }
  // dy_t = det + rho y_{t-1} + sum phi_j dy_{t-j}
  std::vector<double> dy(y.size() - 1);
  for (std::size_t t = 1; t < y.size(); ++t) dy[t - 1] = y[t] - y[t - 1];
  const auto p = static_cast<std::size_t>(lags);
  if (dy.size() <= p + 10) throw std::invalid_argument("adf_test: too many lags for the sample");
  const std::size_t n = dy.size() - p;
  std::vector<std::vector<double>> cols;
  add_deterministic(cols, det, n);
  std::vector<double> level(n), dep(n);
  for (std::size_t t = 0; t < n; ++t) {
    level[t] = y[t + p];
    dep[t] = dy[t + p];
  }
  const std::size_t rho = cols.size();
  cols.push_back(std::move(level));
  for (std::size_t j = 1; j <= p; ++j) {
    std::vector<double> lagged(n);
    for (std::size_t t = 0; t < n; ++t) lagged[t] = dy[t + p - j];
    cols.push_back(std::move(lagged));
  }
  const auto fit = ols(cols, dep);
  const double se = std::sqrt(fit.s2 * fit.xtx_inv[rho][rho]);
  if (!(se > 0.0)) throw std::invalid_argument("adf_test: degenerate regressors");
  return df_result(det, fit.beta[rho] / se, n, lags);
}

UnitRootResult pp_test(std::span<const double> y, Deterministic det, int lags) {
  check_input(y);
  if (lags < 0) throw std::invalid_argument("pp_test: negative lag count");
  const auto fit = ar_regression(y, det);
  const auto& e = fit.fit.resid;
  const auto n = static_cast<double>(e.size());
  double gamma0 = 0.0;
  const double lambda2 = long_run_variance(e, lags, gamma0);
  if (!(lambda2 > 0.0)) throw std::invalid_argument("pp_test: nonpositive long-run variance");
  const double lambda = std::sqrt(lambda2);
  const double s = std::sqrt(fit.fit.s2);
  const double z = std::sqrt(gamma0 / lambda2) * fit.t - (lambda2 - gamma0) / (2.0 * lambda) * n * fit.se / s;
  return df_result(det, z, e.size(), lags);
}

UnitRootResult kpss_test(std::span<const double> y, bool trend, int lags) {
  check_input(y);
  if (lags < 0) throw std::invalid_argument("kpss_test: negative lag count");
  std::vector<std::vector<double>> cols;
  add_deterministic(cols, trend ? Deterministic::trend : Deterministic::constant, y.size());
  const auto fit = ols(cols, std::vector<double>(y.begin(), y.end()));
  const auto& e = fit.resid;
  double gamma0 = 0.0;
  const double lambda2 = long_run_variance(e, lags, gamma0);
  if (!(lambda2 > 0.0)) throw std::invalid_argument("kpss_test: constant series");
  double partial = 0.0, ss = 0.0;
  for (double v : e) {
    partial += v;
    ss += partial * partial;
  }
  const auto n = static_cast<double>(e.size());

  UnitRootResult r;
  r.statistic = ss / (n * n * lambda2);
  r.nobs = e.size();
  r.lags = lags;
  // Upper-tail points at 10%, 5%, 2.5%, 1%.
  static constexpr double kProbs[4] = {0.10, 0.05, 0.025, 0.01};
  static constexpr double kTrendCv[4] = {0.119, 0.146, 0.176, 0.216};
  static constexpr double kLevelCv[4] = {0.347, 0.463, 0.574, 0.739};
  const double* cv = trend ? kTrendCv : kLevelCv;
  r.critical_value = cv[1];
  r.reject = r.statistic > cv[1];
  r.p_value = interpolate_p(std::vector<double>(cv, cv + 4), kProbs, r.statistic, &r.p_clipped);
  return r;
}

}  // namespace abm::stats
