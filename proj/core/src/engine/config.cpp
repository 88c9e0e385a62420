#include "abm/engine/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace abm::engine {

namespace {

std::string trim(std::string_view s) {
  const auto* b = s.begin();
  const auto* e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(key) + ": expected a finite number, got '" + s + "'");
  }
  return v;
}

long long parse_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string(key) + ": expected an integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  std::string s = trim(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument(std::string(key) + ": expected true/false, got '" + s + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Distribution Distribution::parse(std::string_view text) {
  const std::string s = trim(text);
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    return constant(parse_double("distribution", s));
  }
  const std::string kind = trim(std::string_view(s).substr(0, colon));
  const std::string args = s.substr(colon + 1);
  if (kind == "const") return constant(parse_double("const", args));
  const auto comma = args.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("distribution '" + s + "': expected two comma-separated parameters");
  }
  const double a = parse_double(kind, std::string_view(args).substr(0, comma));
  const double b = parse_double(kind, std::string_view(args).substr(comma + 1));
  if (kind == "uniform") {
    if (b < a) throw std::invalid_argument("distribution '" + s + "': uniform needs lo <= hi");
    return uniform(a, b);
  }
  if (kind == "normal") {
    if (b < 0.0) throw std::invalid_argument("distribution '" + s + "': normal needs sd >= 0");
    return normal(a, b);
  }
  throw std::invalid_argument("distribution '" + s + "': unknown kind '" + kind + "'");
}

std::string Distribution::to_string() const {
  switch (kind) {
    case Kind::constant: return "const:" + fmt(a);
    case Kind::uniform: return "uniform:" + fmt(a) + "," + fmt(b);
    case Kind::normal: return "normal:" + fmt(a) + "," + fmt(b);
  }
  return {};
}

double Distribution::sample(Rng& rng) const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::uniform: return a + (b - a) * rng.uniform();
    case Kind::normal: return a + b * standard_normal(rng);
  }
  return a;
}

double Distribution::lower() const noexcept {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::uniform: return a;
    case Kind::normal: return b == 0.0 ? a : -HUGE_VAL;
  }
  return a;
}

double Distribution::upper() const noexcept {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::uniform: return b;
    case Kind::normal: return b == 0.0 ? a : HUGE_VAL;
  }
  return a;
}

void TreatmentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument(key + ": " + why);
  };
  if (n_agents < 0) fail("n_agents", "must be >= 0");
  if (ticks_per_day < 1) fail("ticks_per_day", "must be >= 1");
  if (n_days < 1) fail("n_days", "must be >= 1");
  if (!(tick_size > 0.0)) fail("tick_size", "must be positive");
  if (!(fundamental_p0 > 0.0)) fail("p_f_0", "must be positive");
  if (!std::isfinite(fundamental_mu)) fail("mu", "must be finite");
  if (!(fundamental_sigma >= 0.0) || !std::isfinite(fundamental_sigma)) fail("sigma", "must be finite and >= 0");
  if (!std::isfinite(risk_free_rate) || risk_free_rate <= -1.0) fail("r_f", "must be finite and > -1");
  if (lookback_max < 2) fail("L_max", "must be >= 2");
  if (!(entry_prob.lower() > 0.0 && entry_prob.upper() <= 1.0)) fail("lambda", "support must lie in (0,1]");
  if (!(risk_aversion.lower() > 0.0)) fail("A", "support must be positive");
  if (!(max_leverage >= 0.0)) fail("max_leverage", "must be >= 0");
  if (min_fraction > 0.0) fail("min_fraction", "must be <= 0");
  if (!(variance_floor > 0.0)) fail("variance_floor", "must be positive");
  if (stock0.kind == Distribution::Kind::normal && stock0.b > 0.0) fail("s_0", "must be bounded");
  if (total_ticks() < warmup_ticks()) fail("n_days", "n_days * ticks_per_day must be >= L_max + 1");
  try {
    risk.validate();
  } catch (const std::invalid_argument& e) {
    fail("risk", e.what());
  }
}

bool TreatmentConfig::shares_initial_conditions(const TreatmentConfig& other) const {
  auto a = to_key_values();
  auto b = other.to_key_values();
  for (auto* m : {&a, &b}) {
    for (auto it = m->begin(); it != m->end();) {
      if (it->first == "name" || it->first.rfind("risk.", 0) == 0) {
        it = m->erase(it);
      } else {
        ++it;
      }
    }
  }
  return a == b;
}

std::map<std::string, std::string> TreatmentConfig::to_key_values() const {
  return {
      {"name", name},
      {"n_agents", std::to_string(n_agents)},
      {"ticks_per_day", std::to_string(ticks_per_day)},
      {"n_days", std::to_string(n_days)},
      {"tick_size", fmt(tick_size)},
      {"p_f_0", fmt(fundamental_p0)},
      {"mu", fmt(fundamental_mu)},
      {"sigma", fmt(fundamental_sigma)},
      {"r_f", fmt(risk_free_rate)},
      {"g1", g1.to_string()},
      {"g2", g2.to_string()},
      {"n", noise.to_string()},
      {"lambda", entry_prob.to_string()},
      {"L_max", std::to_string(lookback_max)},
      {"A", risk_aversion.to_string()},
      {"c_0", cash0.to_string()},
      {"s_0", stock0.to_string()},
      {"max_leverage", fmt(max_leverage)},
      {"short_allowed", short_allowed ? "true" : "false"},
      {"min_fraction", fmt(min_fraction)},
      {"variance_floor", fmt(variance_floor)},
      {"risk.metric", std::string(regulation::to_string(risk.metric))},
      {"risk.confidence", fmt(risk.confidence)},
      {"risk.window", std::to_string(risk.window)},
      {"risk.horizon", std::to_string(risk.horizon)},
      {"risk.multiplier", fmt(risk.capital_multiplier)},
      {"risk.update_interval", std::to_string(risk.update_interval)},
      {"master_seed", std::to_string(master_seed)},
  };
}

void TreatmentConfig::set(std::string_view key_view, std::string_view value) {
  const std::string key(key_view);
  const std::string v = trim(value);
  auto as_int = [&] { return static_cast<int>(parse_int(key, v)); };
  if (key == "name") {
    name = v;
  } else if (key == "n_agents") {
    n_agents = as_int();
  } else if (key == "ticks_per_day") {
    ticks_per_day = as_int();
  } else if (key == "n_days") {
    n_days = as_int();
  } else if (key == "tick_size") {
    tick_size = parse_double(key, v);
  } else if (key == "p_f_0") {
    fundamental_p0 = parse_double(key, v);
  } else if (key == "mu") {
    fundamental_mu = parse_double(key, v);
  } else if (key == "sigma") {
    fundamental_sigma = parse_double(key, v);
  } else if (key == "r_f") {
    risk_free_rate = parse_double(key, v);
  } else if (key == "g1") {
    g1 = Distribution::parse(v);
  } else if (key == "g2") {
    g2 = Distribution::parse(v);
  } else if (key == "n") {
    noise = Distribution::parse(v);
  } else if (key == "lambda") {
    entry_prob = Distribution::parse(v);
  } else if (key == "L_max") {
    lookback_max = as_int();
  } else if (key == "A") {
    risk_aversion = Distribution::parse(v);
  } else if (key == "c_0") {
    cash0 = Distribution::parse(v);
  } else if (key == "s_0") {
    stock0 = Distribution::parse(v);
  } else if (key == "max_leverage") {
    max_leverage = parse_double(key, v);
  } else if (key == "short_allowed") {
    short_allowed = parse_bool(key, v);
  } else if (key == "min_fraction") {
    min_fraction = parse_double(key, v);
  } else if (key == "variance_floor") {
    variance_floor = parse_double(key, v);
  } else if (key == "risk.metric") {
    risk.metric = regulation::parse_risk_metric(v);
    risk.confidence = regulation::RiskConfig::default_confidence(risk.metric);
  } else if (key == "risk.confidence") {
    risk.confidence = parse_double(key, v);
  } else if (key == "risk.window") {
    risk.window = as_int();
  } else if (key == "risk.horizon") {
    risk.horizon = as_int();
  } else if (key == "risk.multiplier") {
    risk.capital_multiplier = parse_double(key, v);
  } else if (key == "risk.update_interval") {
    risk.update_interval = as_int();
  } else if (key == "master_seed") {
    master_seed = static_cast<std::uint64_t>(parse_int(key, v));
  } else {
    throw std::invalid_argument("unknown key '" + key + "'");
  }
}

std::vector<TreatmentConfig> parse_config(std::string_view text) {
  struct Entry {
    int line;
    std::string key;
    std::string value;
  };
  std::vector<Entry> base;
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": malformed section header");
      }
      sections.emplace_back(trim(std::string_view(line).substr(1, line.size() - 2)), std::vector<Entry>{});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    }
    Entry e{line_no, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1))};
    (sections.empty() ? base : sections.back().second).push_back(std::move(e));
  }

  auto apply = [](TreatmentConfig& cfg, const std::vector<Entry>& entries) {
    // risk.metric resets the confidence default, so it goes first.
    std::vector<const Entry*> ordered;
    for (const auto& e : entries) {
      if (e.key == "risk.metric") ordered.push_back(&e);
    }
    for (const auto& e : entries) {
      if (e.key != "risk.metric") ordered.push_back(&e);
    }
    for (const Entry* e : ordered) {
      try {
        cfg.set(e->key, e->value);
      } catch (const std::invalid_argument& err) {
        throw std::invalid_argument("line " + std::to_string(e->line) + ": " + err.what());
      }
    }
  };

  TreatmentConfig root;
  apply(root, base);
  std::vector<TreatmentConfig> out;
  if (sections.empty()) {
    out.push_back(root);
  } else {
    for (const auto& [name, entries] : sections) {
      TreatmentConfig cfg = root;
      cfg.name = name;
      apply(cfg, entries);
      out.push_back(std::move(cfg));
    }
  }
  for (const auto& cfg : out) cfg.validate();
  return out;
}

std::vector<TreatmentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream body;
  body << in.rdbuf();
  return parse_config(body.str());
}

std::string config_hash(const TreatmentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : cfg.to_key_values()) {
    for (char c : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace abm::engine
