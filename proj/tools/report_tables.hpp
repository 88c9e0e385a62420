#pragma once

#include <ostream>

#include "abm/stats/battery.hpp"

namespace abmval {

enum class Format { text, csv };

/// Prints the moments, Hill, power-law, duration, unit-root and verdict
/// tables. Everything comes from the report aggregates.
void print_report(const abm::stats::FactReport& report, Format format, std::ostream& out);

}  // namespace abmval
