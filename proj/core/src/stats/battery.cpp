#include "abm/stats/battery.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "abm/stats/descriptive.hpp"
#include "abm/stats/garch.hpp"
#include "abm/stats/tails.hpp"
#include "abm/stats/unit_root.hpp"
#include "json.hpp"

namespace abm::stats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Curve acf_curve(const AcfResult& a) {
  Curve c;
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) c.lags.push_back(static_cast<int>(k));
  c.values = a.coeffs;
  c.bound = a.bound;
  return c;
}

Curve ccf_curve(const CcfResult& a) {
  Curve c;
  for (int k = -a.max_lag; k <= a.max_lag; ++k) c.lags.push_back(k);
  c.values = a.coeffs;
  c.bound = a.bound;
  return c;
}

int clamp_lag(int wanted, std::size_t n) { return std::max(1, std::min<int>(wanted, static_cast<int>(n) / 4)); }

std::string percent(double f) {
  const double p = f * 100.0;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

void put_moments(FactRun& run, std::span<const double> r) {
  const auto m = moments(r);
  run.scalars["n"] = static_cast<double>(r.size());
  run.scalars["mean"] = m.mean;
  run.scalars["std"] = m.std;
  run.scalars["min"] = m.min;
  run.scalars["max"] = m.max;
  if (m.skewness) run.scalars["skewness"] = *m.skewness;
  if (m.kurtosis) run.scalars["kurtosis"] = *m.kurtosis;
}

void put_hill(FactRun& run, std::span<const double> x, const std::string& prefix) {
  const auto panel = hill_panel(x);
  for (std::size_t f = 0; f < kHillFractions.size(); ++f) {
    const auto pc = percent(kHillFractions[f]);
    if (panel[f][0]) run.scalars[prefix + "left_" + pc] = *panel[f][0];
    if (panel[f][1]) run.scalars[prefix + "right_" + pc] = *panel[f][1];
  }
}

void put_unit_root(FactRun& run, const std::string& name, const std::function<UnitRootResult()>& test) {
  try {
    const auto r = test();
    run.scalars[name + ".stat"] = r.statistic;
    run.scalars[name + ".p"] = r.p_value;
    run.scalars[name + ".cv"] = r.critical_value;
    run.scalars[name + ".reject"] = r.reject ? 1.0 : 0.0;
  } catch (const std::invalid_argument&) {
  }
}

using Series = std::function<const std::vector<double>&(const MarketSeries&)>;

enum class Needs { daily, ticks, fundamental };

struct FactDef {
  std::string selector;
  std::string frequency;
  Needs needs;
  std::function<FactRun(const MarketSeries&, const BatteryConfig&)> compute;
  std::function<Verdict(const FactEntry&)> verdict;

  [[nodiscard]] std::string id() const { return selector + "." + frequency; }
};

const std::vector<double>& daily_prices(const MarketSeries& s) { return s.daily_close; }
const std::vector<double>& tick_prices(const MarketSeries& s) { return s.tick_price; }

double scalar_mean(const FactEntry& e, const std::string& key) {
  const auto it = e.scalars.find(key);
  return it == e.scalars.end() ? kNaN : it->second.mean;
}

// Number of runs whose scalar satisfies pred.
std::size_t count_runs(const FactEntry& e, const std::string& key, const std::function<bool(double)>& pred) {
  std::size_t n = 0;
  for (const auto& r : e.runs) {
    const auto it = r.scalars.find(key);
    if (it != r.scalars.end() && pred(it->second)) ++n;
  }
  return n;
}

// Mean curve strictly above its bound over lags lo..hi.
Verdict significant_positive(const FactEntry& e, const std::string& curve, int lo, int hi, const std::string& rule) {
  Verdict v;
  v.rule = rule;
  const auto it = e.curves.find(curve);
  if (it == e.curves.end()) return v;
  const auto& c = it->second;
  v.holds = true;
  int checked = 0;
  double weakest = INFINITY;
  for (std::size_t i = 0; i < c.lags.size(); ++i) {
    if (c.lags[i] < lo || c.lags[i] > hi) continue;
    ++checked;
    weakest = std::min(weakest, c.mean[i]);
    if (!(c.mean[i] > c.bound)) v.holds = false;
  }
  if (checked == 0) v.holds = false;
  v.evidence["lags_checked"] = checked;
  v.evidence["weakest_mean"] = weakest;
  v.evidence["bound"] = c.bound;
  return v;
}

Verdict curve_within_bounds(const FactEntry& e, const std::string& curve, const std::string& rule) {
  Verdict v;
  v.rule = rule;
  const auto it = e.curves.find(curve);
  if (it == e.curves.end()) return v;
  const auto& c = it->second;
  int inside = 0, total = 0;
  for (std::size_t i = 0; i < c.lags.size(); ++i) {
    if (c.lags[i] < 1) continue;
    ++total;
    if (std::abs(c.mean[i]) <= c.bound) ++inside;
  }
  const double share = total ? static_cast<double>(inside) / total : 0.0;
  v.holds = total > 0 && share >= 0.9;
  v.evidence["share_within_bound"] = share;
  v.evidence["lag1_mean"] = c.lags.size() > 1 ? c.mean[1] : kNaN;
  v.evidence["bound"] = c.bound;
  return v;
}

std::vector<FactDef> build_facts() {
  std::vector<FactDef> defs;
  for (const char* freq : {"daily", "tick"}) {
    const bool tick = std::string(freq) == "tick";
    const Needs needs = tick ? Needs::ticks : Needs::daily;
    const Series prices = tick ? Series(tick_prices) : Series(daily_prices);

    defs.push_back({"moments", freq, needs,
                    [prices](const MarketSeries& s, const BatteryConfig&) {
                      FactRun run;
                      put_moments(run, log_returns(prices(s), 1));
                      return run;
                    },
                    [](const FactEntry& e) {
                      Verdict v{"mean kurtosis above 3 (heavy tails)", false, {}};
                      const double k = scalar_mean(e, "kurtosis");
                      v.holds = k > 3.0;
                      v.evidence["mean_kurtosis"] = k;
                      v.evidence["runs_above_3"] = static_cast<double>(count_runs(e, "kurtosis", [](double x) { return x > 3.0; }));
                      return v;
                    }});

    defs.push_back({"scaling", freq, needs,
                    [prices, tick](const MarketSeries& s, const BatteryConfig&) {
                      static const std::vector<int> daily_scales{1, 2, 5, 10, 20};
                      static const std::vector<int> tick_scales{1, 2, 5, 10, 20, 50, 100, 200, 400, 1000};
                      const auto& scales = tick ? tick_scales : daily_scales;
                      FactRun run;
                      Curve c;
                      c.bound = kNaN;
                      for (const auto& sk : kurtosis_by_scale(prices(s), scales)) {
                        if (!sk.kurtosis) continue;
                        c.lags.push_back(sk.dt);
                        c.values.push_back(*sk.kurtosis);
                      }
                      if (c.lags.empty()) throw std::invalid_argument("kurtosis undefined at every scale");
                      run.curves["kurtosis"] = std::move(c);
                      return run;
                    },
                    [](const FactEntry& e) {
                      Verdict v{"kurtosis falls from the finest to the coarsest scale (aggregational Gaussianity)", false, {}};
                      const auto it = e.curves.find("kurtosis");
                      if (it == e.curves.end() || it->second.mean.size() < 2) return v;
                      const auto& m = it->second.mean;
                      v.holds = m.back() < m.front();
                      v.evidence["finest"] = m.front();
                      v.evidence["coarsest"] = m.back();
                      return v;
                    }});

    defs.push_back({"hill", freq, needs,
                    [prices](const MarketSeries& s, const BatteryConfig&) {
                      FactRun run;
                      put_hill(run, log_returns(prices(s), 1), "");
                      if (run.scalars.empty()) throw std::invalid_argument("no tail fraction admits a Hill estimate");
                      return run;
                    },
                    [](const FactEntry& e) {
                      Verdict v{"mean 5% Hill index of both tails between 2 and 5", false, {}};
                      const double l = scalar_mean(e, "left_5"), r = scalar_mean(e, "right_5");
                      v.holds = l > 2.0 && l < 5.0 && r > 2.0 && r < 5.0;
                      v.evidence["left_5"] = l;
                      v.evidence["right_5"] = r;
                      return v;
                    }});

    defs.push_back({"conditional", freq, needs,
                    [prices](const MarketSeries& s, const BatteryConfig&) {
                      FactRun run;
                      const auto r = log_returns(prices(s), 1);
                      for (const auto innov : {Innovation::gaussian, Innovation::student_t}) {
                        const std::string pre = innov == Innovation::gaussian ? "gaussian." : "student_t.";
                        const auto fit = garch_filter(r, innov);
                        run.scalars[pre + "omega"] = fit.omega;
                        run.scalars[pre + "alpha"] = fit.alpha;
                        run.scalars[pre + "beta"] = fit.beta;
                        if (fit.nu) run.scalars[pre + "nu"] = *fit.nu;
                        run.scalars[pre + "loglik"] = fit.loglik;
                        run.scalars[pre + "converged"] = fit.converged ? 1.0 : 0.0;
                        run.scalars[pre + "igarch"] = fit.igarch ? 1.0 : 0.0;
                        const auto m = moments(fit.z);
                        if (m.kurtosis) run.scalars[pre + "kurtosis"] = *m.kurtosis;
                        put_hill(run, fit.z, pre);
                      }
                      return run;
                    },
                    [](const FactEntry& e) {
                      Verdict v{"standardised residuals stay leptokurtic (mean kurtosis of z above 3)", false, {}};
                      const double g = scalar_mean(e, "gaussian.kurtosis"), t = scalar_mean(e, "student_t.kurtosis");
                      v.holds = g > 3.0 && t > 3.0;
                      v.evidence["gaussian_kurtosis"] = g;
                      v.evidence["student_t_kurtosis"] = t;
                      return v;
                    }});

    defs.push_back({"leverage", freq, needs,
                    [prices](const MarketSeries& s, const BatteryConfig& cfg) {
                      const auto r = log_returns(prices(s), 1);
                      FactRun run;
                      run.curves["L"] = ccf_curve(leverage_corr(r, clamp_lag(cfg.ccf_lags, r.size())));
                      return run;
                    },
                    [](const FactEntry& e) {
                      Verdict v{"mean L(tau) negative over tau = 1..5", false, {}};
                      const auto it = e.curves.find("L");
                      if (it == e.curves.end()) return v;
                      double s = 0.0;
                      int n = 0;
                      for (std::size_t i = 0; i < it->second.lags.size(); ++i) {
                        if (it->second.lags[i] >= 1 && it->second.lags[i] <= 5) {
                          s += it->second.mean[i];
                          ++n;
                        }
                      }
                      v.holds = n > 0 && s / n < 0.0;
                      v.evidence["mean_L_1_5"] = n ? s / n : kNaN;
                      v.evidence["bound"] = it->second.bound;
                      return v;
                    }});

    defs.push_back({"acf", freq, needs,
                    [prices, tick](const MarketSeries& s, const BatteryConfig& cfg) {
                      const auto r = log_returns(prices(s), 1);
                      FactRun run;
                      const auto a = sample_acf(r, clamp_lag(tick ? cfg.tick_lags : cfg.daily_lags, r.size()));
                      run.scalars["lag1"] = a.coeffs[1];
                      run.scalars["bound"] = a.bound;
                      run.curves["acf"] = acf_curve(a);
                      return run;
                    },
                    [](const FactEntry& e) { return curve_within_bounds(e, "acf", "mean return ACF inside the bound at 90% of lags (no linear predictability)"); }});

    defs.push_back({"vol_clustering", freq, needs,
                    [prices, tick](const MarketSeries& s, const BatteryConfig& cfg) {
                      const auto r = log_returns(prices(s), 1);
                      FactRun run;
                      const auto a = volatility_clustering_acf(r, clamp_lag(tick ? cfg.tick_lags : cfg.daily_lags, r.size()));
                      run.scalars["lag1"] = a.coeffs[1];
                      run.curves["acf"] = acf_curve(a);
                      return run;
                    },
                    [](const FactEntry& e) { return significant_positive(e, "acf", 1, 20, "mean squared-return ACF above the bound at lags 1..20"); }});

    defs.push_back({"long_memory", freq, needs,
                    [prices, tick](const MarketSeries& s, const BatteryConfig& cfg) {
                      const auto r = log_returns(prices(s), 1);
                      FactRun run;
                      const auto a = long_memory_acf(r, clamp_lag(tick ? cfg.tick_lags : cfg.daily_lags, r.size()));
                      run.scalars["lag1"] = a.coeffs[1];
                      run.curves["acf"] = acf_curve(a);
                      return run;
                    },
                    [](const FactEntry& e) { return significant_positive(e, "acf", 1, 20, "mean absolute-return ACF above the bound at lags 1..20"); }});

    defs.push_back({"unit_root", freq, needs,
                    [prices](const MarketSeries& s, const BatteryConfig&) {
                      const auto r = log_returns(prices(s), 1);
                      FactRun run;
                      put_unit_root(run, "adf", [&] { return adf_test(r); });
                      put_unit_root(run, "pp", [&] { return pp_test(r); });
                      put_unit_root(run, "kpss", [&] { return kpss_test(r, true); });
                      if (run.scalars.empty()) throw std::invalid_argument("unit-root tests failed");
                      return run;
                    },
                    [](const FactEntry& e) {
                      Verdict v{"returns stationary: PP rejects a unit root in every run", false, {}};
                      const auto n = e.runs.size() - e.failed;
                      const auto pp = count_runs(e, "pp.reject", [](double x) { return x > 0.5; });
                      v.holds = n > 0 && pp == n;
                      v.evidence["pp_rejections"] = static_cast<double>(pp);
                      v.evidence["adf_rejections"] = static_cast<double>(count_runs(e, "adf.reject", [](double x) { return x > 0.5; }));
                      v.evidence["kpss_rejections"] = static_cast<double>(count_runs(e, "kpss.reject", [](double x) { return x > 0.5; }));
                      v.evidence["runs"] = static_cast<double>(n);
                      return v;
                    }});
  }

  defs.push_back({"bubbles", "daily", Needs::fundamental,
                  [](const MarketSeries& s, const BatteryConfig& cfg) {
                    const auto c = bubble_return_ccf(s, clamp_lag(cfg.ccf_lags, s.daily_close.size()));
                    FactRun run;
                    run.scalars["lag0"] = c.at(0);
                    run.scalars["lag1"] = c.at(1);
                    run.scalars["bound"] = c.bound;
                    run.curves["ccf"] = ccf_curve(c);
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"mean lag-0 bubble/return correlation positive and above the bound", false, {}};
                    const double l0 = scalar_mean(e, "lag0"), b = scalar_mean(e, "bound");
                    v.holds = l0 > b;
                    v.evidence["lag0"] = l0;
                    v.evidence["bound"] = b;
                    return v;
                  }});

  defs.push_back({"horizons", "daily", Needs::daily,
                  [](const MarketSeries& s, const BatteryConfig& cfg) {
                    FactRun run;
                    for (const auto dir : {Direction::gain, Direction::loss}) {
                      const std::string pre = dir == Direction::gain ? "gain." : "loss.";
                      const auto h = investment_horizons(s.daily_close, cfg.horizon_rho, dir);
                      run.scalars[pre + "samples"] = static_cast<double>(h.samples.size());
                      run.scalars[pre + "censored"] = static_cast<double>(h.censored);
                      if (h.samples.empty()) continue;
                      run.scalars[pre + "modal"] = h.modal;
                      run.scalars[pre + "mean"] = h.mean;
                      run.scalars[pre + "median"] = h.median;
                      run.scalars[pre + "std"] = h.std;
                      Curve c;
                      c.bound = kNaN;
                      for (int k = 1; k <= 50; ++k) {
                        c.lags.push_back(k);
                        const auto uk = static_cast<std::size_t>(k);
                        const double cnt = uk < h.counts.size() ? static_cast<double>(h.counts[uk]) : 0.0;
                        c.values.push_back(cnt / static_cast<double>(h.samples.size()));
                      }
                      run.curves[pre + "distribution"] = std::move(c);
                    }
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"gain horizons longer than loss horizons on average", false, {}};
                    const double g = scalar_mean(e, "gain.mean"), l = scalar_mean(e, "loss.mean");
                    v.holds = g > l;
                    v.evidence["gain_mean"] = g;
                    v.evidence["loss_mean"] = l;
                    return v;
                  }});

  defs.push_back({"premium", "daily", Needs::daily,
                  [](const MarketSeries& s, const BatteryConfig&) {
                    const auto e = equity_premium(log_returns(s.daily_close, 1), s.risk_free_annual);
                    FactRun run;
                    run.scalars["realised"] = e.realised;
                    run.scalars["risk_free"] = s.risk_free_annual;
                    run.scalars["premium"] = e.premium;
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"mean annual equity premium positive", false, {}};
                    const double p = scalar_mean(e, "premium");
                    v.holds = p > 0.0;
                    v.evidence["premium"] = p;
                    return v;
                  }});

  defs.push_back({"excess_vol", "daily", Needs::fundamental,
                  [](const MarketSeries& s, const BatteryConfig&) {
                    const auto ev = excess_volatility(log_returns(s.daily_close, 1), log_returns(s.daily_fundamental, 1));
                    FactRun run;
                    run.scalars["market"] = ev.market;
                    run.scalars["fundamental"] = ev.fundamental;
                    run.scalars["excess"] = ev.excess ? 1.0 : 0.0;
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"market volatility exceeds fundamental volatility in every run", false, {}};
                    const auto n = e.runs.size() - e.failed;
                    const auto k = count_runs(e, "excess", [](double x) { return x > 0.5; });
                    v.holds = n > 0 && k == n;
                    v.evidence["runs_with_excess"] = static_cast<double>(k);
                    v.evidence["runs"] = static_cast<double>(n);
                    return v;
                  }});

  defs.push_back({"powerlaw", "daily", Needs::daily,
                  [](const MarketSeries& s, const BatteryConfig& cfg) {
                    const auto panel = power_law_panel(s, cfg.power_law_synth, cfg.power_law);
                    FactRun run;
                    std::string errors;
                    for (std::size_t i = 0; i < panel.size(); ++i) {
                      const std::string name = kPowerLawSeries[i];
                      if (!panel[i].fit) {
                        errors += (errors.empty() ? "" : "; ") + name + ": " + panel[i].error;
                        continue;
                      }
                      const auto& f = *panel[i].fit;
                      run.scalars[name + ".zeta"] = f.zeta;
                      run.scalars[name + ".xmin"] = f.xmin;
                      run.scalars[name + ".zeta_se"] = f.zeta_se;
                      run.scalars[name + ".xmin_se"] = f.xmin_se;
                      run.scalars[name + ".n_tail"] = static_cast<double>(f.n_tail);
                      run.scalars[name + ".ks"] = f.ks;
                      run.scalars[name + ".p"] = f.p_value.value_or(kNaN);
                      run.scalars[name + ".unrejected"] = f.p_value.value_or(0.0) >= 0.05 ? 1.0 : 0.0;
                    }
                    if (run.scalars.empty()) throw std::invalid_argument(errors);
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"power law not rejected (p >= 0.05) for |returns| in most runs", false, {}};
                    const auto n = e.runs.size() - e.failed;
                    const auto k = count_runs(e, "returns.unrejected", [](double x) { return x > 0.5; });
                    v.holds = n > 0 && 2 * k > n;
                    for (const char* name : kPowerLawSeries) {
                      v.evidence[std::string(name) + "_unrejected"] =
                          static_cast<double>(count_runs(e, std::string(name) + ".unrejected", [](double x) { return x > 0.5; }));
                    }
                    v.evidence["runs"] = static_cast<double>(n);
                    return v;
                  }});

  defs.push_back({"volume_volatility", "tick", Needs::ticks,
                  [](const MarketSeries& s, const BatteryConfig& cfg) {
                    const auto vv = volume_volatility_ccf(s, cfg.volume_bin, cfg.ccf_lags);
                    FactRun run;
                    run.scalars["bins"] = static_cast<double>(vv.bins);
                    run.scalars["volume_lag0"] = vv.volume.at(0);
                    run.scalars["trades_lag0"] = vv.trades.at(0);
                    run.scalars["bound"] = vv.volume.bound;
                    run.curves["volume"] = ccf_curve(vv.volume);
                    run.curves["trades"] = ccf_curve(vv.trades);
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"mean lag-0 volatility/volume correlation positive and above the bound", false, {}};
                    const double l0 = scalar_mean(e, "volume_lag0"), b = scalar_mean(e, "bound");
                    v.holds = l0 > b;
                    v.evidence["volume_lag0"] = l0;
                    v.evidence["trades_lag0"] = scalar_mean(e, "trades_lag0");
                    v.evidence["bound"] = b;
                    return v;
                  }});

  defs.push_back({"durations", "tick", Needs::ticks,
                  [](const MarketSeries& s, const BatteryConfig& cfg) {
                    const auto x = durations(s.trade_times);
                    if (x.empty()) throw std::invalid_argument("fewer than two distinct trade times");
                    const auto f = duration_facts(x, cfg.tick_lags);
                    FactRun run;
                    run.scalars["count"] = static_cast<double>(x.size());
                    run.scalars["mean"] = f.mean;
                    run.scalars["std"] = f.std;
                    run.scalars["min"] = *std::min_element(x.begin(), x.end());
                    run.scalars["max"] = *std::max_element(x.begin(), x.end());
                    run.scalars["dispersion"] = f.dispersion;
                    if (f.acf) run.curves["acf"] = acf_curve(*f.acf);
                    if (f.squared_acf) run.curves["squared_acf"] = acf_curve(*f.squared_acf);
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"durations overdispersed (mean std/mean above 1)", false, {}};
                    const double d = scalar_mean(e, "dispersion");
                    v.holds = d > 1.0;
                    v.evidence["dispersion"] = d;
                    v.evidence["mean_duration"] = scalar_mean(e, "mean");
                    return v;
                  }});

  defs.push_back({"spread", "tick", Needs::ticks,
                  [](const MarketSeries& s, const BatteryConfig& cfg) {
                    const auto f = spread_facts(s, cfg.ccf_lags);
                    FactRun run;
                    run.scalars["bounce"] = f.bounce;
                    run.scalars["bound"] = f.acf_bound;
                    run.scalars["dropped"] = static_cast<double>(f.dropped);
                    run.scalars["bid_lag0"] = f.bid.at(0);
                    run.scalars["ask_lag0"] = f.ask.at(0);
                    run.curves["bid"] = ccf_curve(f.bid);
                    run.curves["ask"] = ccf_curve(f.ask);
                    return run;
                  },
                  [](const FactEntry& e) {
                    Verdict v{"negative mean lag-1 tick-return autocorrelation (bid-ask bounce)", false, {}};
                    const double b = scalar_mean(e, "bounce");
                    v.holds = b < 0.0;
                    v.evidence["bounce"] = b;
                    v.evidence["bid_lag0"] = scalar_mean(e, "bid_lag0");
                    v.evidence["ask_lag0"] = scalar_mean(e, "ask_lag0");
                    return v;
                  }});
  return defs;
}

const std::vector<FactDef>& fact_defs() {
  static const std::vector<FactDef> defs = build_facts();
  return defs;
}

bool supports(const MarketSeries& s, Needs needs) {
  switch (needs) {
    case Needs::ticks: return s.has_ticks();
    case Needs::fundamental: return s.has_fundamental();
    case Needs::daily: break;
  }
  return !s.daily_close.empty();
}

double quantile7(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CurveSummary summarise_curve(const std::vector<const Curve*>& curves) {
  CurveSummary out;
  // Lags common to all runs, in the first run's order.
  out.lags = curves.front()->lags;
  for (const auto* c : curves) {
    std::vector<int> keep;
    for (int l : out.lags) {
      if (std::find(c->lags.begin(), c->lags.end(), l) != c->lags.end()) keep.push_back(l);
    }
    out.lags = std::move(keep);
  }
  out.n = curves.size();
  double bound = 0.0;
  for (const auto* c : curves) bound += c->bound;
  out.bound = bound / static_cast<double>(curves.size());
  for (int l : out.lags) {
    std::vector<double> v;
    for (const auto* c : curves) {
      const auto i = static_cast<std::size_t>(std::find(c->lags.begin(), c->lags.end(), l) - c->lags.begin());
      v.push_back(c->values[i]);
    }
    double s = 0.0;
    for (double e : v) s += e;
    out.mean.push_back(s / static_cast<double>(v.size()));
    std::sort(v.begin(), v.end());
    out.median.push_back(quantile7(v, 0.5));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& fact_selectors() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : fact_defs()) {
      if (std::find(v.begin(), v.end(), d.selector) == v.end()) v.push_back(d.selector);
    }
    return v;
  }();
  return names;
}

const FactEntry* FactGroup::find(const std::string& id) const {
  for (const auto& f : facts) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

const FactGroup* FactReport::find(const std::string& name) const {
  for (const auto& g : groups) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

ScalarSummary summarise(std::span<const double> values) {
  ScalarSummary s;
  std::vector<double> v;
  for (double x : values) {
    if (std::isfinite(x)) v.push_back(x);
  }
  s.n = v.size();
  if (v.empty()) {
    s.mean = s.median = s.q25 = s.q75 = s.min = s.max = kNaN;
    return s;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  s.median = quantile7(sorted, 0.5);
  s.q25 = quantile7(sorted, 0.25);
  s.q75 = quantile7(sorted, 0.75);
  s.min = sorted.front();
  s.max = sorted.back();
  const double iqr = s.q75 - s.q25;
  std::size_t idx = 0;
  for (double x : values) {
    if (std::isfinite(x) && (x < s.q25 - 1.5 * iqr || x > s.q75 + 1.5 * iqr)) s.outliers.push_back(idx);
    ++idx;
  }
  return s;
}

RunFacts compute_run_facts(const MarketSeries& s, const BatteryConfig& cfg) {
  RunFacts out;
  for (const auto& def : fact_defs()) {
    if (!cfg.enabled(def.selector) || !supports(s, def.needs)) continue;
    try {
      out[def.id()] = def.compute(s, cfg);
    } catch (const std::exception& e) {
      FactRun failed;
      failed.error = e.what();
      out[def.id()] = std::move(failed);
    }
  }
  return out;
}

FactGroup aggregate_group(const std::string& name, std::vector<std::string> labels, std::vector<RunFacts> runs,
                          const BatteryConfig& cfg) {
  FactGroup g;
  g.name = name;
  g.labels = std::move(labels);
  for (const auto& def : fact_defs()) {
    if (!cfg.enabled(def.selector)) continue;
    FactEntry e;
    e.id = def.id();
    e.selector = def.selector;
    e.frequency = def.frequency;
    std::size_t present = 0;
    for (auto& r : runs) {
      auto it = r.find(e.id);
      if (it == r.end()) {
        FactRun missing;
        missing.error = "unavailable for this series";
        e.runs.push_back(std::move(missing));
      } else {
        ++present;
        e.runs.push_back(std::move(it->second));
      }
    }
    if (present == 0) {
      e.available = false;
      e.note = def.needs == Needs::ticks ? "no tick data" : def.needs == Needs::fundamental ? "no fundamental series" : "no data";
      e.failed = e.runs.size();
      e.runs.clear();
      g.facts.push_back(std::move(e));
      continue;
    }

    std::set<std::string> scalar_keys, curve_keys;
    for (const auto& r : e.runs) {
      if (!r.error.empty()) {
        ++e.failed;
        continue;
      }
      for (const auto& [k, v] : r.scalars) scalar_keys.insert(k);
      for (const auto& [k, v] : r.curves) curve_keys.insert(k);
    }
    for (const auto& k : scalar_keys) {
      std::vector<double> v;
      for (const auto& r : e.runs) {
        const auto it = r.scalars.find(k);
        v.push_back(it == r.scalars.end() || !r.error.empty() ? kNaN : it->second);
      }
      e.scalars[k] = summarise(v);
    }
    for (const auto& k : curve_keys) {
      std::vector<const Curve*> cs;
      for (const auto& r : e.runs) {
        const auto it = r.curves.find(k);
        if (r.error.empty() && it != r.curves.end()) cs.push_back(&it->second);
      }
      if (!cs.empty()) e.curves[k] = summarise_curve(cs);
    }
    e.verdict = def.verdict(e);
    g.facts.push_back(std::move(e));
  }
  return g;
}

FactReport run_fact_battery(std::span<const MarketSeries> series, const BatteryConfig& cfg) {
  if (series.empty()) throw std::invalid_argument("run_fact_battery: empty batch");
  std::vector<RunFacts> per_run(series.size());
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(series.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < series.size(); i = next++) per_run[i] = compute_run_facts(series[i], cfg);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::string> order;
  for (const auto& s : series) {
    if (std::find(order.begin(), order.end(), s.group) == order.end()) order.push_back(s.group);
  }
  FactReport report;
  for (const auto& name : order) {
    std::vector<std::string> labels;
    std::vector<RunFacts> runs;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (series[i].group != name) continue;
      labels.push_back(series[i].label);
      runs.push_back(std::move(per_run[i]));
    }
    report.groups.push_back(aggregate_group(name, std::move(labels), std::move(runs), cfg));
  }
  return report;
}

// ---------------------------------------------------------------- JSON

namespace {

using json = nlohmann::ordered_json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json& j) { return j.is_number() ? j.get<double>() : kNaN; }

json curve_json(const std::vector<int>& lags, const std::vector<double>& values, double bound) {
  json j;
  j["lags"] = lags;
  auto v = json::array();
  for (double x : values) v.push_back(num(x));
  j["values"] = std::move(v);
  j["bound"] = num(bound);
  return j;
}

std::vector<double> num_array(const json& j) {
  std::vector<double> out;
  for (const auto& e : j) out.push_back(get_num(e));
  return out;
}

}  // namespace

std::string to_json(const FactReport& report, bool include_runs) {
  json root;
  root["schema"] = kReportSchema;
  root["tool_version"] = report.tool_version;
  auto groups = json::array();
  for (const auto& g : report.groups) {
    json jg;
    jg["name"] = g.name;
    jg["runs"] = g.labels.size();
    jg["labels"] = g.labels;
    json facts = json::object();
    for (const auto& f : g.facts) {
      json jf;
      jf["selector"] = f.selector;
      jf["frequency"] = f.frequency;
      jf["available"] = f.available;
      if (!f.note.empty()) jf["note"] = f.note;
      jf["computed"] = f.runs.size() - std::min(f.failed, f.runs.size());
      jf["failed"] = f.failed;
      json agg = json::object();
      for (const auto& [k, s] : f.scalars) {
        agg[k] = {{"n", s.n},           {"mean", num(s.mean)}, {"median", num(s.median)}, {"q25", num(s.q25)},
                  {"q75", num(s.q75)},  {"min", num(s.min)},   {"max", num(s.max)},       {"outliers", s.outliers}};
      }
      jf["aggregates"] = std::move(agg);
      json curves = json::object();
      for (const auto& [k, c] : f.curves) {
        json jc;
        jc["n"] = c.n;
        jc["lags"] = c.lags;
        auto m = json::array(), md = json::array();
        for (double x : c.mean) m.push_back(num(x));
        for (double x : c.median) md.push_back(num(x));
        jc["mean"] = std::move(m);
        jc["median"] = std::move(md);
        jc["bound"] = num(c.bound);
        curves[k] = std::move(jc);
      }
      jf["curves"] = std::move(curves);
      json verdict;
      verdict["rule"] = f.verdict.rule;
      verdict["holds"] = f.verdict.holds;
      json ev = json::object();
      for (const auto& [k, v] : f.verdict.evidence) ev[k] = num(v);
      verdict["evidence"] = std::move(ev);
      jf["verdict"] = std::move(verdict);
      if (include_runs) {
        auto runs = json::array();
        for (const auto& r : f.runs) {
          json jr;
          if (!r.error.empty()) {
            jr["error"] = r.error;
          } else {
            json sc = json::object();
            for (const auto& [k, v] : r.scalars) sc[k] = num(v);
            jr["scalars"] = std::move(sc);
            json cv = json::object();
            for (const auto& [k, c] : r.curves) cv[k] = curve_json(c.lags, c.values, c.bound);
            jr["curves"] = std::move(cv);
          }
          runs.push_back(std::move(jr));
        }
        jf["per_run"] = std::move(runs);
      }
      facts[f.id] = std::move(jf);
    }
    jg["facts"] = std::move(facts);
    groups.push_back(std::move(jg));
  }
  root["groups"] = std::move(groups);
  root["input_errors"] = report.input_errors;
  return root.dump(1);
}

FactReport report_from_json(const std::string& text) {
  const auto root = json::parse(text, nullptr, false);
  if (root.is_discarded()) throw std::runtime_error("report: invalid JSON");
  if (!root.is_object() || root.value("schema", "") != kReportSchema) {
    throw std::runtime_error(std::string("report: expected schema ") + kReportSchema);
  }
  try {
    FactReport report;
    report.tool_version = root.value("tool_version", "");
    if (root.contains("input_errors")) report.input_errors = root["input_errors"].get<std::vector<std::string>>();
    for (const auto& jg : root.at("groups")) {
      FactGroup g;
      g.name = jg.at("name").get<std::string>();
      g.labels = jg.at("labels").get<std::vector<std::string>>();
      for (const auto& [id, jf] : jg.at("facts").items()) {
        FactEntry f;
        f.id = id;
        f.selector = jf.at("selector").get<std::string>();
        f.frequency = jf.at("frequency").get<std::string>();
        f.available = jf.at("available").get<bool>();
        f.note = jf.value("note", "");
        f.failed = jf.at("failed").get<std::size_t>();
        for (const auto& [k, a] : jf.at("aggregates").items()) {
          ScalarSummary s;
          s.n = a.at("n").get<std::size_t>();
          s.mean = get_num(a.at("mean"));
          s.median = get_num(a.at("median"));
          s.q25 = get_num(a.at("q25"));
          s.q75 = get_num(a.at("q75"));
          s.min = get_num(a.at("min"));
          s.max = get_num(a.at("max"));
          s.outliers = a.at("outliers").get<std::vector<std::size_t>>();
          f.scalars[k] = std::move(s);
        }
        for (const auto& [k, c] : jf.at("curves").items()) {
          CurveSummary cs;
          cs.n = c.at("n").get<std::size_t>();
          cs.lags = c.at("lags").get<std::vector<int>>();
          cs.mean = num_array(c.at("mean"));
          cs.median = num_array(c.at("median"));
          cs.bound = get_num(c.at("bound"));
          f.curves[k] = std::move(cs);
        }
        const auto& v = jf.at("verdict");
        f.verdict.rule = v.at("rule").get<std::string>();
        f.verdict.holds = v.at("holds").get<bool>();
        for (const auto& [k, e] : v.at("evidence").items()) f.verdict.evidence[k] = get_num(e);
        if (jf.contains("per_run")) {
          for (const auto& jr : jf["per_run"]) {
            FactRun r;
            if (jr.contains("error")) {
              r.error = jr["error"].get<std::string>();
            } else {
              for (const auto& [k, e] : jr.at("scalars").items()) r.scalars[k] = get_num(e);
              for (const auto& [k, c] : jr.at("curves").items()) {
                Curve cv;
                cv.lags = c.at("lags").get<std::vector<int>>();
                cv.values = num_array(c.at("values"));
                cv.bound = get_num(c.at("bound"));
                r.curves[k] = std::move(cv);
              }
            }
            f.runs.push_back(std::move(r));
          }
        }
        g.facts.push_back(std::move(f));
      }
      report.groups.push_back(std::move(g));
    }
    return report;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report: schema mismatch: ") + e.what());
  }
}

namespace {

std::string csv_num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

}  // namespace

std::vector<std::filesystem::path> write_fact_csvs(const FactReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& g : report.groups) {
    for (const auto& f : g.facts) {
      const std::string stem = file_safe(g.name) + "_" + file_safe(f.id);
      for (const auto& [k, c] : f.curves) {
        const auto path = dir / (stem + "_" + file_safe(k) + ".csv");
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "lag,mean,median,upper,lower\n";
        for (std::size_t i = 0; i < c.lags.size(); ++i) {
          out << c.lags[i] << ',' << csv_num(c.mean[i]) << ',' << csv_num(c.median[i]) << ',' << csv_num(c.bound)
              << ',' << csv_num(-c.bound) << '\n';
        }
        written.push_back(path);
      }
      if (f.scalars.empty() || f.runs.empty()) continue;
      const auto path = dir / (stem + "_runs.csv");
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << "run";
      for (const auto& [k, s] : f.scalars) out << ',' << k;
      out << '\n';
      for (std::size_t i = 0; i < f.runs.size(); ++i) {
        out << (i < g.labels.size() ? g.labels[i] : std::to_string(i));
        for (const auto& [k, s] : f.scalars) {
          const auto it = f.runs[i].scalars.find(k);
          out << ',' << (it == f.runs[i].scalars.end() ? "" : csv_num(it->second));
        }
        out << '\n';
      }
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace abm::stats
