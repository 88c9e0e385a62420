#include "abm/stats/power_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "abm/random.hpp"

namespace abm::stats {

namespace {

struct PointFit {
  double zeta{0.0};
  double xmin{0.0};
  double ks{INFINITY};
  std::size_t n_tail{0};
};

// Sorted ascending input with logs precomputed.
PointFit scan(const std::vector<double>& sorted, const std::vector<double>& logs, const PowerLawOptions& opts) {
  const std::size_t n = sorted.size();
  if (n < opts.min_tail || opts.min_tail == 0) throw std::invalid_argument("fit_power_law: too few points for the tail");

  // suffix[i] = sum of logs[i..n)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + logs[i];

  // Eligible candidates: first index of each distinct value with a large
  // enough tail.
  std::vector<std::size_t> cands;
  for (std::size_t i = 0; i + opts.min_tail <= n; ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) cands.push_back(i);
  }
  if (cands.empty()) throw std::invalid_argument("fit_power_law: no x_min candidate leaves enough tail points");
  if (opts.max_candidates > 0 && cands.size() > opts.max_candidates) {
    std::vector<std::size_t> thin;
    const std::size_t m = opts.max_candidates;
    for (std::size_t j = 0; j < m; ++j) thin.push_back(cands[j * (cands.size() - 1) / (m - 1 > 0 ? m - 1 : 1)]);
    thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
    cands = std::move(thin);
  }

  struct Cand {
    std::size_t i;
    double alpha;  // zeta - 1
    double bound;  // KS distance over a strided subset, a lower bound
  };
  auto deviation = [&](std::size_t i, double alpha, std::size_t j) {
    const double inv = 1.0 / static_cast<double>(n - i);
    const double cdf = 1.0 - std::exp(alpha * (logs[i] - logs[i + j]));
    return std::max(std::abs(static_cast<double>(j + 1) * inv - cdf), std::abs(cdf - static_cast<double>(j) * inv));
  };
  std::vector<Cand> order;
  for (std::size_t i : cands) {
    const std::size_t nt = n - i;
    const double s = suffix[i] - static_cast<double>(nt) * logs[i];
    if (!(s > 0.0)) continue;
    const double alpha = static_cast<double>(nt) / s;
    const std::size_t stride = std::max<std::size_t>(1, nt / 32);
    double b = 0.0;
    for (std::size_t j = 0; j < nt; j += stride) b = std::max(b, deviation(i, alpha, j));
    order.push_back({i, alpha, b});
  }
  // Scanning the most promising candidates first lets the rest stop early.
  // Ties in the full distance still go to the smallest x_min.
  std::stable_sort(order.begin(), order.end(), [](const Cand& a, const Cand& b) { return a.bound < b.bound; });

  PointFit best;
  std::size_t best_i = n;
  for (const auto& c : order) {
    if (c.bound > best.ks) break;
    const std::size_t nt = n - c.i;
    double d = c.bound;
    for (std::size_t j = 0; j < nt && d <= best.ks; ++j) d = std::max(d, deviation(c.i, c.alpha, j));
    if (d < best.ks || (d == best.ks && c.i < best_i)) {
      best = {1.0 + c.alpha, sorted[c.i], d, nt};
      best_i = c.i;
    }
  }
  if (!std::isfinite(best.ks)) throw std::invalid_argument("fit_power_law: degenerate tail at every candidate");
  return best;
}

PointFit fit_point(std::vector<double> data, const PowerLawOptions& opts) {
  std::sort(data.begin(), data.end());
  std::vector<double> logs(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) logs[i] = std::log(data[i]);
  return scan(data, logs, opts);
}

void check_positive(std::span<const double> x) {
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("fit_power_law: data must be positive and finite");
  }
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = 0.0;
  for (double e : v) m += e;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double e : v) ss += (e - m) * (e - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

double power_law_mle(std::span<const double> x, double xmin) {
  if (!(xmin > 0.0)) throw std::invalid_argument("power_law_mle: xmin must be positive");
  std::size_t n = 0;
  double s = 0.0;
  for (double v : x) {
    if (v >= xmin) {
      ++n;
      s += std::log(v / xmin);
    }
  }
  if (n == 0 || !(s > 0.0)) throw std::invalid_argument("power_law_mle: degenerate tail");
  return 1.0 + static_cast<double>(n) / s;
}

PowerLawFit fit_power_law(std::span<const double> x, const PowerLawOptions& opts) {
  check_positive(x);
  std::vector<double> data(x.begin(), x.end());
  const PointFit p = fit_point(data, opts);
  PowerLawFit fit;
  fit.zeta = p.zeta;
  fit.xmin = p.xmin;
  fit.ks = p.ks;
  fit.n = data.size();
  fit.n_tail = p.n_tail;

  if (opts.bootstrap_reps > 0) {
    Rng rng(derive_seed(opts.seed, {tag("power-law-resample")}));
    std::vector<double> zetas, xmins;
    std::vector<double> resample(data.size());
    for (int r = 0; r < opts.bootstrap_reps; ++r) {
      for (double& v : resample) v = data[rng.below(data.size())];
      try {
        const PointFit b = fit_point(resample, opts);
        zetas.push_back(b.zeta);
        xmins.push_back(b.xmin);
      } catch (const std::invalid_argument&) {
      }
    }
    fit.zeta_se = sample_std(zetas);
    fit.xmin_se = sample_std(xmins);
  }
  return fit;
}

GofResult power_law_gof(std::span<const double> x, const PowerLawFit& fit, int n_synth, const PowerLawOptions& opts) {
  check_positive(x);
  if (!(fit.zeta > 1.0) || !(fit.xmin > 0.0)) throw std::invalid_argument("power_law_gof: invalid fit");
  GofResult out;
  out.few_sets = n_synth < 100;
  std::vector<double> body;
  std::size_t n_tail = 0;
  for (double v : x) {
    if (v < fit.xmin) {
      body.push_back(v);
    } else {
      ++n_tail;
    }
  }
  const double p_tail = static_cast<double>(n_tail) / static_cast<double>(x.size());

  // Synthetic sets are built directly as sorted logs, since only their KS
  // distances are used. Body points (all below x_min) are a bootstrap from
  // the sorted body; tail points are exponential order statistics of
  // log(x / x_min) from Renyi's spacing representation.
  std::vector<double> body_logs(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) body_logs[i] = std::log(body[i]);
  std::sort(body_logs.begin(), body_logs.end());
  const double log_xmin = std::log(fit.xmin);
  const double alpha = fit.zeta - 1.0;

  Rng rng(derive_seed(opts.seed, {tag("power-law-gof")}));
  const std::size_t n = x.size();
  std::vector<double> logs(n);
  std::vector<std::uint32_t> counts(body.size());
  int exceed = 0;
  for (int s = 0; s < n_synth; ++s) {
    std::size_t m = 0;
    if (body.empty()) {
      m = n;
    } else {
      for (std::size_t i = 0; i < n; ++i) m += rng.uniform() < p_tail;
    }
    std::fill(counts.begin(), counts.end(), 0u);
    for (std::size_t i = m; i < n; ++i) ++counts[rng.below(body.size())];
    std::size_t k = 0;
    for (std::size_t b = 0; b < counts.size(); ++b) {
      for (std::uint32_t c = 0; c < counts[b]; ++c) logs[k++] = body_logs[b];
    }
    double e = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      e -= std::log1p(-rng.uniform()) / static_cast<double>(m - j);
      logs[k++] = log_xmin + e / alpha;
    }
    try {
      const PointFit f = scan(logs, logs, opts);
      ++out.n_synth;
      if (f.ks > fit.ks) ++exceed;
    } catch (const std::invalid_argument&) {
    }
  }
  out.p_value = out.n_synth > 0 ? static_cast<double>(exceed) / out.n_synth : 0.0;
  return out;
}

}  // namespace abm::stats
