#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace abm::stats::detail {

struct Minimum {
  std::vector<double> x;
  double value{0.0};
  int evaluations{0};
  bool converged{false};
};

// Plain Nelder-Mead with the standard coefficients. Non-finite objective
// values are treated as +inf so the simplex backs away from them.
inline Minimum nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                           double step = 0.5, int max_evals = 20000, double ftol = 1e-10, double xtol = 1e-8) {
  const std::size_t n = start.size();
  auto eval = [&](const std::vector<double>& p, int& count) {
    ++count;
    const double v = f(p);
    return std::isfinite(v) ? v : INFINITY;
  };
  int count = 0;
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i], count);

  std::vector<std::size_t> order(n + 1);
  bool converged = false;
  while (count < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) size = std::max(size, std::abs(pts[i][j] - pts[best][j]));
    }
    if (std::abs(vals[worst] - vals[best]) <= ftol * (std::abs(vals[best]) + 1e-300) && size <= xtol) {
      converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
      return p;
    };

    auto xr = along(-1.0);
    const double fr = eval(xr, count);
    if (fr < vals[best]) {
      auto xe = along(-2.0);
      const double fe = eval(xe, count);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = std::move(xr);
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    auto xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc, count);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = std::move(xc);
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      vals[i] = eval(pts[i], count);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], count, converged};
}

}  // namespace abm::stats::detail
