#include "abm/engine/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace abm::engine {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), ptr);
}

namespace {

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
  return out;
}

}  // namespace

void write_daily_csv(const DailySeries& d, const fs::path& file) {
  auto out = open_out(file);
  out << "day,close,fundamental,volume,n_trades\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << d.day[i] << ',' << format_number(d.close[i]) << ',' << format_number(d.fundamental[i]) << ','
        << d.volume[i] << ',' << d.n_trades[i] << '\n';
  }
}

void write_ticks_csv(const TickSeries& t, const fs::path& file) {
  auto out = open_out(file);
  out << "tick,price,best_bid,best_ask,spread,volume,n_trades,fundamental,bid_depth,ask_depth\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << t.tick[i] << ',' << format_number(t.price[i]) << ',' << format_number(t.best_bid[i]) << ','
        << format_number(t.best_ask[i]) << ',' << format_number(t.spread[i]) << ',' << t.volume[i] << ','
        << t.n_trades[i] << ',' << format_number(t.fundamental[i]) << ',' << t.bid_depth[i] << ','
        << t.ask_depth[i] << '\n';
  }
}

void write_manifest(const SimulationRecord& rec, const fs::path& file, const std::string& tool_version) {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version;
  j["treatment"] = rec.config.name;
  j["config_hash"] = config_hash(rec.config);
  j["master_seed"] = rec.config.master_seed;
  j["run_index"] = rec.run_index;
  j["seed"] = rec.seed;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : rec.config.to_key_values()) cfg[k] = v;
  j["config"] = cfg;
  j["ticks"] = rec.ticks.size();
  j["days"] = rec.daily.size();
  j["trades"] = rec.trade_ticks.size();
  j["default_entries"] = rec.default_entries;

  auto agents = nlohmann::ordered_json::array();
  for (const auto& a : rec.agents) {
    agents.push_back({{"id", a.id},
                      {"g1", a.g1},
                      {"g2", a.g2},
                      {"n", a.noise},
                      {"L", a.lookback},
                      {"lambda", a.entry_prob},
                      {"tau", a.horizon},
                      {"A", a.risk_aversion},
                      {"c_0", a.cash0},
                      {"s_0", a.stock0}});
  }
  j["agents"] = std::move(agents);

  // [tick, agent, metric, desired shares, cap]
  auto events = nlohmann::ordered_json::array();
  for (const auto& e : rec.constraint_events) {
    events.push_back(nlohmann::ordered_json::array({e.tick, e.agent, e.risk_metric, e.desired, e.cap}));
  }
  j["constraint_events"] = std::move(events);

  auto out = open_out(file);
  out << j.dump(1) << '\n';
}

void write_run(const SimulationRecord& rec, const fs::path& dir, const std::string& tool_version) {
  fs::create_directories(dir);
  write_daily_csv(rec.daily, dir / "daily.csv");
  write_ticks_csv(rec.ticks, dir / "ticks.csv");
  write_manifest(rec, dir / "manifest.json", tool_version);
}

}  // namespace abm::engine
