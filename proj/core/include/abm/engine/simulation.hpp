#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "abm/engine/config.hpp"

namespace abm::engine {

/// Tick-level output, one entry per recorded (post warm-up) tick. Missing
/// quotes and undefined spreads are NaN.
struct TickSeries {
  std::vector<std::int64_t> tick;
  std::vector<double> price;
  std::vector<double> fundamental;
  std::vector<double> best_bid;
  std::vector<double> best_ask;
  std::vector<double> spread;
  std::vector<std::int64_t> volume;
  std::vector<std::int64_t> n_trades;
  std::vector<std::int64_t> bid_depth;
  std::vector<std::int64_t> ask_depth;

  [[nodiscard]] std::size_t size() const noexcept { return tick.size(); }
  void reserve(std::size_t n);
};

struct DailySeries {
  std::vector<int> day;
  std::vector<double> close;
  std::vector<double> fundamental;
  std::vector<std::int64_t> volume;
  std::vector<std::int64_t> n_trades;

  [[nodiscard]] std::size_t size() const noexcept { return day.size(); }
};

/// End-of-day agent state.
struct AgentSnapshot {
  int day{0};
  std::uint32_t agent{0};
  double wealth{0.0};
  double cash{0.0};
  std::int64_t shares{0};
  bool defaulted{false};
};

/// Drawn parameters of one agent, echoed into the run manifest.
struct AgentParams {
  std::uint32_t id{0};
  double g1{0.0};
  double g2{0.0};
  double noise{0.0};
  int lookback{0};
  double entry_prob{0.0};
  int horizon{0};
  double risk_aversion{0.0};
  double cash0{0.0};
  std::int64_t stock0{0};
};

/// The capital rule cut an agent's desired position.
struct ConstraintEvent {
  std::int64_t tick{0};
  std::uint32_t agent{0};
  double risk_metric{0.0};
  std::int64_t desired{0};
  std::int64_t cap{0};
};

struct SimulationRecord {
  TreatmentConfig config;
  std::uint64_t seed{0};
  int run_index{0};
  TickSeries ticks;
  DailySeries daily;
  std::vector<std::int64_t> trade_ticks;  // one entry per trade, nondecreasing
  std::vector<AgentParams> agents;
  std::vector<AgentSnapshot> panel;
  std::vector<ConstraintEvent> constraint_events;
  std::int64_t default_entries{0};  // entries skipped because of technical default
};

/// Seed for run `run_index` of a batch: identical across treatments that share
/// a master seed, so paired runs see the same agents and fundamental path.
[[nodiscard]] std::uint64_t run_seed(std::uint64_t master_seed, int run_index) noexcept;

/// One seeded run. Deterministic in (cfg, seed). Throws std::invalid_argument
/// from cfg.validate() before any simulation work.
[[nodiscard]] SimulationRecord run_simulation(const TreatmentConfig& cfg, std::uint64_t seed);

/// Closing price, fundamental close, summed volume and trade counts per day.
[[nodiscard]] DailySeries sample_daily(const TickSeries& ticks, int ticks_per_day);

/// Runs every treatment `n_runs` times with paired seeds. All treatments must
/// share initial conditions (everything but name and capital rule). Runs are
/// distributed over `threads` workers (0 = hardware concurrency); the output
/// does not depend on the thread count. Result is indexed [treatment][run].
[[nodiscard]] std::vector<std::vector<SimulationRecord>> run_batch(std::span<const TreatmentConfig> treatments,
                                                                   int n_runs, unsigned threads = 0);

/// Streaming form of run_batch: `sink(treatment, run, record)` is called once
/// per run as it finishes (serialised, in no particular order), so callers
/// that reduce each record need not hold the whole batch in memory.
using RunSink = std::function<void(std::size_t treatment, int run, SimulationRecord&& record)>;
void for_each_run(std::span<const TreatmentConfig> treatments, int n_runs, const RunSink& sink, unsigned threads = 0);

/// Throws std::invalid_argument unless every treatment shares initial
/// conditions with the first one.
void check_comparable(std::span<const TreatmentConfig> treatments);

}  // namespace abm::engine
