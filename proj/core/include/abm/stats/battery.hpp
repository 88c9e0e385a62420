#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "abm/stats/market_series.hpp"
#include "abm/stats/power_law.hpp"

namespace abm::stats {

/// Fact selectors accepted by BatteryConfig::facts, in report order.
[[nodiscard]] const std::vector<std::string>& fact_selectors();

struct BatteryConfig {
  std::set<std::string> facts;  // selectors; empty means all
  int daily_lags{20};
  int tick_lags{100};
  int ccf_lags{20};
  double horizon_rho{0.0025};
  int power_law_synth{1000};
  PowerLawOptions power_law{};
  int volume_bin{30};
  unsigned threads{0};  // 0 = hardware concurrency

  [[nodiscard]] bool enabled(const std::string& selector) const { return facts.empty() || facts.count(selector) > 0; }
};

/// A lag-indexed statistic of one run (ACF, CCF, kurtosis by scale).
/// `bound` is NaN when the curve has no confidence band.
struct Curve {
  std::vector<int> lags;
  std::vector<double> values;
  double bound{0.0};
};

/// One fact on one run. A nonempty error means the fact failed for this run.
struct FactRun {
  std::map<std::string, double> scalars;
  std::map<std::string, Curve> curves;
  std::string error;
};

struct ScalarSummary {
  std::size_t n{0};
  double mean{0.0};
  double median{0.0};
  double q25{0.0};
  double q75{0.0};
  double min{0.0};
  double max{0.0};
  std::vector<std::size_t> outliers;  // run indices beyond 1.5 IQR
};

struct CurveSummary {
  std::vector<int> lags;
  std::vector<double> mean;
  std::vector<double> median;
  double bound{0.0};  // mean of the per-run bounds
  std::size_t n{0};
};

struct Verdict {
  std::string rule;
  bool holds{false};
  std::map<std::string, double> evidence;
};

struct FactEntry {
  std::string id;         // e.g. "moments.tick"
  std::string selector;   // e.g. "moments"
  std::string frequency;  // "daily" or "tick"
  bool available{true};
  std::string note;  // why the fact is unavailable
  std::vector<FactRun> runs;
  std::map<std::string, ScalarSummary> scalars;
  std::map<std::string, CurveSummary> curves;
  std::size_t failed{0};
  Verdict verdict;
};

struct FactGroup {
  std::string name;
  std::vector<std::string> labels;
  std::vector<FactEntry> facts;

  [[nodiscard]] const FactEntry* find(const std::string& id) const;
};

struct FactReport {
  std::string tool_version;
  std::vector<FactGroup> groups;
  std::vector<std::string> input_errors;  // inputs that could not be read

  [[nodiscard]] const FactGroup* find(const std::string& name) const;
};

/// Per-run fact values for every enabled fact, keyed by fact id. Facts a run
/// cannot support (no tick data, no fundamental) are absent.
using RunFacts = std::map<std::string, FactRun>;

[[nodiscard]] RunFacts compute_run_facts(const MarketSeries& s, const BatteryConfig& cfg);

/// Aggregates per-run facts (in run order) into a group.
[[nodiscard]] FactGroup aggregate_group(const std::string& name, std::vector<std::string> labels,
                                        std::vector<RunFacts> runs, const BatteryConfig& cfg);

/// Groups series by MarketSeries::group (first-seen order), computes every
/// enabled fact per run in parallel and aggregates. Failures are recorded
/// per run, never thrown.
[[nodiscard]] FactReport run_fact_battery(std::span<const MarketSeries> series, const BatteryConfig& cfg);

[[nodiscard]] ScalarSummary summarise(std::span<const double> values);

inline constexpr const char* kReportSchema = "abm-fact-report/1";

/// JSON text of the report. Non-finite numbers are written as null.
[[nodiscard]] std::string to_json(const FactReport& report, bool include_runs = true);

/// Throws std::runtime_error when the schema tag or structure is wrong.
[[nodiscard]] FactReport report_from_json(const std::string& text);

/// One CSV per curve (lag,mean,median,upper,lower) and one per fact with the
/// per-run scalars. Returns the files written.
std::vector<std::filesystem::path> write_fact_csvs(const FactReport& report, const std::filesystem::path& dir);

}  // namespace abm::stats
