#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "abm/random.hpp"
#include "abm/regulation/risk.hpp"

namespace abm::engine {

/// Scalar parameter distribution: "const:v", "uniform:lo,hi" or "normal:mean,sd".
struct Distribution {
  enum class Kind : std::uint8_t { constant, uniform, normal };
  Kind kind{Kind::constant};
  double a{0.0};
  double b{0.0};

  static Distribution constant(double v) { return {Kind::constant, v, v}; }
  static Distribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static Distribution normal(double mean, double sd) { return {Kind::normal, mean, sd}; }

  /// Throws std::invalid_argument on malformed text.
  static Distribution parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] double sample(Rng& rng) const;
  [[nodiscard]] double lower() const noexcept;
  [[nodiscard]] double upper() const noexcept;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

/// Every free parameter of one experimental treatment. Rates are per tick.
struct TreatmentConfig {
  std::string name{"unregulated"};

  int n_agents{100};
  int ticks_per_day{200};
  int n_days{504};
  double tick_size{0.01};

  double fundamental_p0{100.0};
  double fundamental_mu{0.0};
  double fundamental_sigma{0.0005};
  double risk_free_rate{0.0};

  Distribution g1{Distribution::uniform(0.0, 1.0)};
  Distribution g2{Distribution::uniform(-1.0, 1.0)};
  Distribution noise{Distribution::uniform(0.0, 0.01)};
  Distribution entry_prob{Distribution::uniform(0.01, 0.1)};
  int lookback_max{50};
  Distribution risk_aversion{Distribution::constant(2.0)};
  Distribution cash0{Distribution::constant(10000.0)};
  Distribution stock0{Distribution::constant(100.0)};

  double max_leverage{1.0};
  bool short_allowed{false};
  double min_fraction{0.0};
  double variance_floor{1e-8};

  regulation::RiskConfig risk{};
  std::uint64_t master_seed{1};

  [[nodiscard]] int warmup_ticks() const noexcept { return lookback_max + 1; }
  [[nodiscard]] std::int64_t total_ticks() const noexcept {
    return static_cast<std::int64_t>(n_days) * ticks_per_day;
  }

  /// Throws std::invalid_argument with the offending key in the message.
  void validate() const;

  /// True when everything except the name and the capital rule matches, i.e.
  /// the two treatments are comparable under common initial conditions.
  [[nodiscard]] bool shares_initial_conditions(const TreatmentConfig& other) const;

  /// Flat key=value representation (the config-file keys).
  [[nodiscard]] std::map<std::string, std::string> to_key_values() const;
  void set(std::string_view key, std::string_view value);
};

/// Parse a config file body. Keys outside any section form the base
/// treatment; each "[name]" section clones the base and applies its
/// overrides. With no sections the base itself is the only treatment.
/// Throws std::invalid_argument ("line N: ...") on unknown keys or bad values.
[[nodiscard]] std::vector<TreatmentConfig> parse_config(std::string_view text);
[[nodiscard]] std::vector<TreatmentConfig> load_config(const std::string& path);

/// Stable 64-bit FNV-1a digest of the key=value form, as 16 hex digits.
[[nodiscard]] std::string config_hash(const TreatmentConfig& cfg);

}  // namespace abm::engine
