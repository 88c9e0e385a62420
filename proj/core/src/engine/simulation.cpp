#include "abm/engine/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "abm/agents/fundamental.hpp"
#include "abm/agents/institution.hpp"
#include "abm/agents/price_history.hpp"
#include "abm/market/order_book.hpp"
#include "abm/regulation/risk.hpp"

namespace abm::engine {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Purpose tags for substreams: seed -> (agent, purpose) or (purpose).
constexpr std::uint64_t kParamsTag = tag("params");
constexpr std::uint64_t kEntryTag = tag("entry");
constexpr std::uint64_t kDecisionTag = tag("decision");
constexpr std::uint64_t kFundamentalTag = tag("fundamental");
constexpr std::uint64_t kShuffleTag = tag("shuffle");

agents::Institution draw_agent(const TreatmentConfig& cfg, std::uint64_t seed, std::uint32_t id, AgentParams& out) {
  Rng rng(derive_seed(seed, {id, kParamsTag}));
  agents::Institution a;
  a.id = id;
  // Fixed draw order; adding a parameter must append, never reorder.
  a.g1 = cfg.g1.sample(rng);
  a.g2 = cfg.g2.sample(rng);
  a.noise = cfg.noise.sample(rng);
  const double lambda = std::clamp(cfg.entry_prob.sample(rng), 1e-9, 1.0);
  a.entry_prob = lambda;
  a.horizon = agents::horizon_for_entry_probability(lambda);
  // Lookback uniform on the integers 2..L_max.
  const auto span = static_cast<std::uint64_t>(cfg.lookback_max - 1);
  a.lookback = 2 + static_cast<int>(rng() % span);
  a.risk_aversion = cfg.risk_aversion.sample(rng);
  a.cash = cfg.cash0.sample(rng);
  a.stock = static_cast<std::int64_t>(std::llround(cfg.stock0.sample(rng)));
  a.max_leverage = cfg.max_leverage;
  a.short_allowed = cfg.short_allowed;
  a.min_fraction = cfg.min_fraction;

  out = AgentParams{id, a.g1, a.g2, a.noise, a.lookback, a.entry_prob, a.horizon, a.risk_aversion, a.cash, a.stock};
  return a;
}

void settle(std::vector<agents::Institution>& agents, const market::Trade& t) {
  const double notional = t.price * static_cast<double>(t.quantity);
  auto& buyer = agents[t.buyer_id];
  auto& seller = agents[t.seller_id];
  buyer.cash -= notional;
  buyer.stock += t.quantity;
  seller.cash += notional;
  seller.stock -= t.quantity;
}

}  // namespace

void TickSeries::reserve(std::size_t n) {
  tick.reserve(n);
  price.reserve(n);
  fundamental.reserve(n);
  best_bid.reserve(n);
  best_ask.reserve(n);
  spread.reserve(n);
  volume.reserve(n);
  n_trades.reserve(n);
  bid_depth.reserve(n);
  ask_depth.reserve(n);
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) noexcept {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(run_index), tag("run")});
}

SimulationRecord run_simulation(const TreatmentConfig& cfg, std::uint64_t seed) {
  cfg.validate();

  SimulationRecord rec;
  rec.config = cfg;
  rec.seed = seed;

  const auto n_agents = static_cast<std::size_t>(cfg.n_agents);
  std::vector<agents::Institution> population;
  population.reserve(n_agents);
  rec.agents.resize(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    population.push_back(draw_agent(cfg, seed, static_cast<std::uint32_t>(i), rec.agents[i]));
  }

  std::vector<Rng> entry_rng;
  std::vector<Rng> decision_rng;
  entry_rng.reserve(n_agents);
  decision_rng.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    entry_rng.emplace_back(derive_seed(seed, {i, kEntryTag}));
    decision_rng.emplace_back(derive_seed(seed, {i, kDecisionTag}));
  }
  Rng fundamental_rng(derive_seed(seed, {kFundamentalTag}));
  Rng shuffle_rng(derive_seed(seed, {kShuffleTag}));

  agents::FundamentalProcess fundamental{cfg.fundamental_p0, cfg.fundamental_mu, cfg.fundamental_sigma};
  market::LimitOrderBook book(cfg.tick_size);

  const int warmup = cfg.warmup_ticks();
  const std::int64_t recorded = cfg.total_ticks();
  agents::PriceHistory history(static_cast<std::size_t>(warmup + recorded));

  // Warm-up: the market price tracks the fundamental so lookbacks are defined.
  history.push(fundamental.price);
  for (int t = 1; t < warmup; ++t) {
    fundamental = fundamental.step(1.0, standard_normal(fundamental_rng));
    history.push(fundamental.price);
  }
  book.set_reference_price(fundamental.price);

  rec.ticks.reserve(static_cast<std::size_t>(recorded));
  std::vector<std::uint32_t> entrants;
  entrants.reserve(n_agents);
  std::vector<market::Trade> trades;

  const bool regulated = cfg.risk.metric != regulation::RiskMetric::none;
  const auto risk_window = static_cast<std::size_t>(cfg.risk.window);
  std::optional<double> risk_metric;

  for (std::int64_t k = 0; k < recorded; ++k) {
    const std::int64_t tick = k;
    fundamental = fundamental.step(1.0, standard_normal(fundamental_rng));

    entrants.clear();
    for (std::size_t i = 0; i < n_agents; ++i) {
      if (entry_rng[i].uniform() < population[i].entry_prob) entrants.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t i = entrants.size(); i > 1; --i) {
      std::swap(entrants[i - 1], entrants[shuffle_rng.below(i)]);
    }

    if (regulated && k % cfg.risk.update_interval == 0) {
      const std::size_t available = history.size() - 1;
      if (available >= static_cast<std::size_t>(regulation::kMinRiskWindow)) {
        risk_metric = regulation::risk_measure(cfg.risk, history.recent_returns(std::min(available, risk_window)));
      }
    }

    std::int64_t tick_volume = 0;
    std::int64_t tick_trades = 0;
    for (std::uint32_t id : entrants) {
      auto& agent = population[id];
      const double price = *book.current_price();
      if (agents::is_technical_default(agent, price)) {
        agent.defaulted = true;
        book.cancel(id);
        ++rec.default_entries;
        continue;
      }
      agent.defaulted = false;

      agents::MarketView view;
      view.price = price;
      view.fundamental = fundamental.price;
      view.history = &history;
      view.risk_free_rate = cfg.risk_free_rate;
      view.variance_floor = cfg.variance_floor;
      view.tick = tick;
      view.tick_size = cfg.tick_size;
      view.risk_metric = risk_metric;
      view.capital_multiplier = cfg.risk.capital_multiplier;

      const auto intent = agents::generate_order(agent, view, decision_rng[id]);
      if (intent.capital_bound) {
        rec.constraint_events.push_back({tick, id, *risk_metric, intent.desired_shares, intent.target_shares});
      }
      if (!intent.order) continue;

      trades.clear();
      book.submit(*intent.order, trades);
      for (const auto& t : trades) {
        settle(population, t);
        tick_volume += t.quantity;
        ++tick_trades;
        rec.trade_ticks.push_back(tick);
      }
    }

    const double price = *book.current_price();
    history.push(price);

    auto& ts = rec.ticks;
    ts.tick.push_back(tick);
    ts.price.push_back(price);
    ts.fundamental.push_back(fundamental.price);
    const auto bid = book.best_bid();
    const auto ask = book.best_ask();
    const auto spread = book.spread();
    ts.best_bid.push_back(bid.value_or(kNaN));
    ts.best_ask.push_back(ask.value_or(kNaN));
    ts.spread.push_back(spread.value_or(kNaN));
    ts.volume.push_back(tick_volume);
    ts.n_trades.push_back(tick_trades);
    ts.bid_depth.push_back(book.bid_depth());
    ts.ask_depth.push_back(book.ask_depth());

    if ((k + 1) % cfg.ticks_per_day == 0) {
      const int day = static_cast<int>(k / cfg.ticks_per_day);
      for (const auto& a : population) {
        rec.panel.push_back(
            {day, a.id, agents::wealth(a, price), a.cash, a.stock, agents::is_technical_default(a, price)});
      }
    }
  }

  rec.daily = sample_daily(rec.ticks, cfg.ticks_per_day);
  return rec;
}

DailySeries sample_daily(const TickSeries& ticks, int ticks_per_day) {
  if (ticks_per_day < 1) throw std::invalid_argument("sample_daily: ticks_per_day must be >= 1");
  DailySeries d;
  const auto per_day = static_cast<std::size_t>(ticks_per_day);
  const std::size_t days = ticks.size() / per_day;
  for (std::size_t day = 0; day < days; ++day) {
    const std::size_t first = day * per_day;
    const std::size_t last = first + per_day - 1;
    d.day.push_back(static_cast<int>(day));
    d.close.push_back(ticks.price[last]);
    d.fundamental.push_back(ticks.fundamental[last]);
    std::int64_t vol = 0;
    std::int64_t n = 0;
    for (std::size_t i = first; i <= last; ++i) {
      vol += ticks.volume[i];
      n += ticks.n_trades[i];
    }
    d.volume.push_back(vol);
    d.n_trades.push_back(n);
  }
  return d;
}

void check_comparable(std::span<const TreatmentConfig> treatments) {
  for (const auto& cfg : treatments) {
    cfg.validate();
    if (!treatments.front().shares_initial_conditions(cfg)) {
      throw std::invalid_argument("treatment '" + cfg.name + "' differs from '" + treatments.front().name +
                                  "' in more than its capital rule; paired runs need shared initial conditions");
    }
  }
}

void for_each_run(std::span<const TreatmentConfig> treatments, int n_runs, const RunSink& sink, unsigned threads) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  if (treatments.empty()) return;
  check_comparable(treatments);

  const std::size_t total = treatments.size() * static_cast<std::size_t>(n_runs);
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      // Run-major order so paired runs of all treatments finish close together.
      const std::size_t treatment = job % treatments.size();
      const int run = static_cast<int>(job / treatments.size());
      try {
        const auto& cfg = treatments[treatment];
        SimulationRecord rec = run_simulation(cfg, run_seed(cfg.master_seed, run));
        rec.run_index = run;
        std::lock_guard lock(sink_mutex);
        if (!failure) sink(treatment, run, std::move(rec));
      } catch (...) {
        std::lock_guard lock(sink_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::vector<SimulationRecord>> run_batch(std::span<const TreatmentConfig> treatments, int n_runs,
                                                     unsigned threads) {
  std::vector<std::vector<SimulationRecord>> out(treatments.size());
  for (auto& v : out) v.resize(static_cast<std::size_t>(std::max(n_runs, 0)));
  for_each_run(
      treatments, n_runs,
      [&](std::size_t treatment, int run, SimulationRecord&& rec) {
        out[treatment][static_cast<std::size_t>(run)] = std::move(rec);
      },
      threads);
  return out;
}

}  // namespace abm::engine
