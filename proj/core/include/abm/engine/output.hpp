#pragma once

#include <filesystem>
#include <string>

#include "abm/engine/simulation.hpp"

namespace abm::engine {

/// Writes daily.csv, ticks.csv and manifest.json into `dir` (created if
/// needed). Numbers use the shortest round-trip representation, so output
/// is byte-identical for identical records.
void write_run(const SimulationRecord& rec, const std::filesystem::path& dir, const std::string& tool_version);

void write_daily_csv(const DailySeries& daily, const std::filesystem::path& file);
void write_ticks_csv(const TickSeries& ticks, const std::filesystem::path& file);
void write_manifest(const SimulationRecord& rec, const std::filesystem::path& file, const std::string& tool_version);

/// Shortest decimal that round-trips to `v`; empty for NaN.
[[nodiscard]] std::string format_number(double v);

}  // namespace abm::engine
