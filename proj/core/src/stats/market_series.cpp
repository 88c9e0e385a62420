#include "abm/stats/market_series.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "abm/engine/simulation.hpp"
#include "abm/random.hpp"
#include "abm/stats/descriptive.hpp"
#include "json.hpp"

namespace abm::stats {

namespace fs = std::filesystem;

namespace {

template <class T>
std::vector<double> as_double(const std::vector<T>& v) {
  return std::vector<double>(v.begin(), v.end());
}

double annual_rate(double per_tick, int ticks_per_day) {
  return std::pow(1.0 + per_tick, kTradingDays * ticks_per_day) - 1.0;
}

struct Table {
  std::map<std::string, std::vector<double>> cols;

  [[nodiscard]] const std::vector<double>* find(const std::string& name) const {
    const auto it = cols.find(name);
    return it == cols.end() ? nullptr : &it->second;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Table read_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(file.string() + ": empty file");
  const auto header = split(line);
  Table t;
  for (const auto& h : header) t.cols[h];
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error(file.string() + ": line " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = NAN;
      const auto& c = cells[i];
      if (!c.empty()) {
        const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
        if (ec != std::errc() || ptr != c.data() + c.size()) {
          throw std::runtime_error(file.string() + ": line " + std::to_string(row) + ": bad number '" + c + "'");
        }
      }
      t.cols[header[i]].push_back(v);
    }
  }
  return t;
}

std::vector<double> tick_returns(const MarketSeries& s) { return log_returns(s.tick_price, 1); }

}  // namespace

MarketSeries market_series(const engine::SimulationRecord& rec) {
  MarketSeries s;
  s.group = rec.config.name;
  s.label = rec.config.name + "/run_" + std::to_string(rec.run_index);
  s.daily_close = rec.daily.close;
  s.daily_fundamental = rec.daily.fundamental;
  s.daily_volume = as_double(rec.daily.volume);
  s.daily_trades = as_double(rec.daily.n_trades);
  s.tick_price = rec.ticks.price;
  s.tick_fundamental = rec.ticks.fundamental;
  s.tick_spread = rec.ticks.spread;
  s.tick_volume = as_double(rec.ticks.volume);
  s.tick_trades = as_double(rec.ticks.n_trades);
  s.bid_depth = as_double(rec.ticks.bid_depth);
  s.ask_depth = as_double(rec.ticks.ask_depth);
  s.trade_times = rec.trade_ticks;
  s.risk_free_annual = annual_rate(rec.config.risk_free_rate, rec.config.ticks_per_day);
  return s;
}

MarketSeries load_daily_csv(const fs::path& file) {
  const auto t = read_csv(file);
  MarketSeries s;
  s.label = file.string();
  s.group = file.stem().string();
  const auto* price = t.find("close");
  if (!price) price = t.find("price");
  if (!price) throw std::runtime_error(file.string() + ": no close or price column");
  s.daily_close = *price;
  if (const auto* f = t.find("fundamental")) s.daily_fundamental = *f;
  if (const auto* v = t.find("volume")) s.daily_volume = *v;
  if (const auto* n = t.find("n_trades")) s.daily_trades = *n;
  return s;
}

MarketSeries load_run_directory(const fs::path& dir) {
  MarketSeries s = load_daily_csv(dir / "daily.csv");
  s.label = dir.string();
  s.group = dir.parent_path().filename().string();
  int ticks_per_day = 0;
  if (fs::exists(dir / "manifest.json")) {
    std::ifstream in(dir / "manifest.json");
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error((dir / "manifest.json").string() + ": invalid JSON");
    if (j.contains("treatment")) s.group = j["treatment"].get<std::string>();
    if (j.contains("config")) {
      const auto& c = j["config"];
      if (c.contains("ticks_per_day")) ticks_per_day = std::stoi(c["ticks_per_day"].get<std::string>());
      if (c.contains("r_f") && ticks_per_day > 0) {
        s.risk_free_annual = annual_rate(std::stod(c["r_f"].get<std::string>()), ticks_per_day);
      }
    }
  }
  if (fs::exists(dir / "ticks.csv")) {
    const auto t = read_csv(dir / "ticks.csv");
    const auto* price = t.find("price");
    const auto* tick = t.find("tick");
    if (!price || !tick) throw std::runtime_error((dir / "ticks.csv").string() + ": missing tick or price column");
    s.tick_price = *price;
    auto copy = [&](const char* name, std::vector<double>& dst) {
      if (const auto* c = t.find(name)) dst = *c;
    };
    copy("fundamental", s.tick_fundamental);
    copy("spread", s.tick_spread);
    copy("volume", s.tick_volume);
    copy("n_trades", s.tick_trades);
    copy("bid_depth", s.bid_depth);
    copy("ask_depth", s.ask_depth);
    // Trade times up to multiplicity; durations only need the distinct ones.
    if (!s.tick_trades.empty()) {
      for (std::size_t i = 0; i < tick->size(); ++i) {
        if (s.tick_trades[i] > 0) s.trade_times.push_back(static_cast<std::int64_t>((*tick)[i]));
      }
    }
  }
  return s;
}

CcfResult bubble_return_ccf(const MarketSeries& s, int max_lag) {
  if (!s.has_fundamental()) throw std::invalid_argument("bubble_return_ccf: no fundamental series");
  const auto b = bubble_series(s.daily_close, s.daily_fundamental);
  const auto r = log_returns(s.daily_close, 1);
  return sample_ccf(std::span<const double>(b).subspan(1), r, max_lag);
}

std::array<PowerLawEntry, 4> power_law_panel(const MarketSeries& s, int n_synth, const PowerLawOptions& opts) {
  std::array<std::vector<double>, 4> data;
  const auto r = log_returns(s.daily_close, 1);
  for (double v : r) data[0].push_back(std::abs(v));
  try {
    data[1] = rolling_volatility(s.daily_close, 5, 1);
  } catch (const std::invalid_argument&) {
  }
  data[2] = s.daily_volume;
  data[3] = s.daily_trades;

  std::array<PowerLawEntry, 4> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<double> positive;
    for (double v : data[i]) {
      if (v > 0.0 && std::isfinite(v)) positive.push_back(v);
    }
    PowerLawOptions o = opts;
    o.seed = derive_seed(opts.seed, {i});
    try {
      auto fit = fit_power_law(positive, o);
      fit.p_value = power_law_gof(positive, fit, n_synth, o).p_value;
      out[i].fit = fit;
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

VolumeVolatility volume_volatility_ccf(const MarketSeries& s, int bin, int max_lag) {
  if (!s.has_ticks()) throw std::invalid_argument("volume_volatility_ccf: no tick series");
  if (bin < 1) throw std::invalid_argument("volume_volatility_ccf: bin must be positive");
  if (s.tick_volume.size() != s.tick_price.size() || s.tick_trades.size() != s.tick_price.size()) {
    throw std::invalid_argument("volume_volatility_ccf: tick volume or trade counts missing");
  }
  const auto r = tick_returns(s);
  const auto b = static_cast<std::size_t>(bin);
  const std::size_t bins = r.size() / b;
  std::vector<double> vol(bins), volume(bins), trades(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double a = 0.0, v = 0.0, n = 0.0;
    for (std::size_t j = k * b; j < (k + 1) * b; ++j) {
      a += std::abs(r[j]);
      v += s.tick_volume[j + 1];  // return j ends at tick j + 1
      n += s.tick_trades[j + 1];
    }
    vol[k] = a / static_cast<double>(b);
    volume[k] = v;
    trades[k] = n;
  }
  return {sample_ccf(vol, volume, max_lag), sample_ccf(vol, trades, max_lag), bins};
}

SpreadFacts spread_facts(const MarketSeries& s, int max_lag) {
  if (!s.has_ticks() || s.tick_spread.size() != s.tick_price.size()) {
    throw std::invalid_argument("spread_facts: no tick spread series");
  }
  if (s.bid_depth.size() != s.tick_price.size() || s.ask_depth.size() != s.tick_price.size()) {
    throw std::invalid_argument("spread_facts: depth series missing");
  }
  SpreadFacts f;
  const auto acf = sample_acf(tick_returns(s), 1);
  f.bounce = acf.coeffs[1];
  f.acf_bound = acf.bound;
  std::vector<double> sp, bid, ask;
  for (std::size_t i = 0; i < s.tick_spread.size(); ++i) {
    if (!std::isfinite(s.tick_spread[i])) {
      ++f.dropped;
      continue;
    }
    sp.push_back(s.tick_spread[i]);
    bid.push_back(s.bid_depth[i]);
    ask.push_back(s.ask_depth[i]);
  }
  f.bid = sample_ccf(sp, bid, max_lag);
  f.ask = sample_ccf(sp, ask, max_lag);
  return f;
}

}  // namespace abm::stats
