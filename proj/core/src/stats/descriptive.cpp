#include "abm/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace abm::stats {

std::vector<double> log_returns(std::span<const double> prices, int dt) {
  if (dt < 1) throw std::invalid_argument("log_returns: dt must be >= 1");
  for (double p : prices) {
    if (!(p > 0.0)) throw std::invalid_argument("log_returns: nonpositive price");
  }
  const auto step = static_cast<std::size_t>(dt);
  if (prices.size() <= step) return {};
  std::vector<double> r(prices.size() - step);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::log(prices[i + step] / prices[i]);
  return r;
}

Moments moments(std::span<const double> x) {
  if (x.size() < 4) throw std::invalid_argument("moments: need at least 4 values");
  const auto n = static_cast<double>(x.size());
  Moments m;
  m.min = *std::min_element(x.begin(), x.end());
  m.max = *std::max_element(x.begin(), x.end());
  double s = 0.0;
  for (double v : x) s += v;
  m.mean = s / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.std = std::sqrt(m2);
  if (m2 > 0.0) {
    m.skewness = m3 / (m2 * m.std);
    m.kurtosis = m4 / (m2 * m2);
  }
  return m;
}

std::vector<ScaleKurtosis> kurtosis_by_scale(std::span<const double> prices, std::span<const int> scales) {
  std::vector<ScaleKurtosis> out;
  out.reserve(scales.size());
  for (int dt : scales) {
    ScaleKurtosis sk;
    sk.dt = dt;
    const auto r = log_returns(prices, dt);
    if (r.size() < 4) {
      sk.insufficient = true;
    } else {
      sk.kurtosis = moments(r).kurtosis;
    }
    out.push_back(sk);
  }
  return out;
}

std::vector<double> bubble_series(std::span<const double> prices, std::span<const double> fundamentals) {
  if (prices.size() != fundamentals.size()) throw std::invalid_argument("bubble_series: length mismatch");
  std::vector<double> b(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0)) throw std::invalid_argument("bubble_series: nonpositive price");
    b[i] = (prices[i] - fundamentals[i]) / prices[i];
  }
  return b;
}

HorizonStats investment_horizons(std::span<const double> prices, double rho, Direction direction) {
  if (!(rho > 0.0)) throw std::invalid_argument("investment_horizons: rho must be positive");
  std::vector<double> logp(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0)) throw std::invalid_argument("investment_horizons: nonpositive price");
    logp[i] = std::log(prices[i]);
  }
  HorizonStats h;
  if (prices.size() < 2) return h;
  for (std::size_t t = 0; t + 1 < logp.size(); ++t) {
    int hit = 0;
    for (std::size_t u = t + 1; u < logp.size(); ++u) {
      const double r = logp[u] - logp[t];
      if (direction == Direction::gain ? r >= rho : r <= -rho) {
        hit = static_cast<int>(u - t);
        break;
      }
    }
    if (hit == 0) {
      ++h.censored;
    } else {
      h.samples.push_back(hit);
    }
  }
  if (h.samples.empty()) return h;

  const int longest = *std::max_element(h.samples.begin(), h.samples.end());
  h.counts.assign(static_cast<std::size_t>(longest) + 1, 0);
  double sum = 0.0;
  for (int s : h.samples) {
    ++h.counts[static_cast<std::size_t>(s)];
    sum += s;
  }
  h.modal = static_cast<int>(std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin());
  const auto n = static_cast<double>(h.samples.size());
  h.mean = sum / n;
  double ss = 0.0;
  for (int s : h.samples) ss += (s - h.mean) * (s - h.mean);
  h.std = std::sqrt(ss / n);
  std::vector<int> sorted = h.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  h.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return h;
}

EquityPremium equity_premium(std::span<const double> daily_returns, double risk_free_annual) {
  EquityPremium e;
  if (!daily_returns.empty()) {
    double s = 0.0;
    for (double r : daily_returns) s += r;
    e.realised = s / static_cast<double>(daily_returns.size()) * kTradingDays;
  }
  e.premium = e.realised - risk_free_annual;
  return e;
}

namespace {

double population_std(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

}  // namespace

ExcessVolatility excess_volatility(std::span<const double> market_returns, std::span<const double> fundamental_returns) {
  if (market_returns.empty() || fundamental_returns.empty()) {
    throw std::invalid_argument("excess_volatility: empty series");
  }
  ExcessVolatility ev;
  const double annual = std::sqrt(kTradingDays);
  ev.market = population_std(market_returns) * annual;
  ev.fundamental = population_std(fundamental_returns) * annual;
  ev.excess = ev.market > ev.fundamental;
  return ev;
}

std::vector<double> rolling_volatility(std::span<const double> prices, int window, int dt) {
  if (dt < 1 || window < dt || window % dt != 0) {
    throw std::invalid_argument("rolling_volatility: window must be a positive multiple of dt");
  }
  const auto n = static_cast<std::size_t>(window / dt);
  const auto g = log_returns(prices, dt);
  if (n > g.size()) throw std::invalid_argument("rolling_volatility: window exceeds data");
  std::vector<double> v(g.size() - n + 1);
  for (std::size_t t = 0; t < v.size(); ++t) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(g[t + j]);
    v[t] = s / static_cast<double>(n);
  }
  return v;
}

std::vector<double> durations(std::span<const std::int64_t> times) {
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("durations: times must be sorted");
  std::vector<double> x;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] != times[i - 1]) x.push_back(static_cast<double>(times[i] - times[i - 1]));
  }
  return x;
}

DurationFacts duration_facts(std::span<const double> x, int max_lag) {
  if (x.empty()) throw std::invalid_argument("duration_facts: empty series");
  DurationFacts f;
  double s = 0.0;
  for (double v : x) s += v;
  f.mean = s / static_cast<double>(x.size());
  if (f.mean == 0.0) throw std::invalid_argument("duration_facts: zero mean");
  f.std = population_std(x);
  f.dispersion = f.std / f.mean;
  if (x.size() >= 30) {
    const int k = std::min<int>(max_lag, static_cast<int>(x.size()) - 1);
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
    try {
      f.acf = sample_acf(x, k);
      f.squared_acf = sample_acf(sq, k);
    } catch (const std::invalid_argument&) {
      f.acf.reset();
      f.squared_acf.reset();
    }
  }
  return f;
}

}  // namespace abm::stats
