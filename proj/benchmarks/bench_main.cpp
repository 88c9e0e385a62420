#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "abm/engine/simulation.hpp"
#include "abm/market/order_book.hpp"
#include "abm/random.hpp"
#include "abm/stats/correlation.hpp"
#include "abm/stats/garch.hpp"
#include "abm/stats/power_law.hpp"
#include "abm/stats/tails.hpp"

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
  abm::Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = abm::standard_normal(rng);
  return x;
}

std::vector<double> pareto(std::size_t n, double alpha, std::uint64_t seed) {
  abm::Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = std::pow(1.0 - rng.uniform(), -1.0 / alpha);
  return x;
}

void BM_OrderBookSubmit(benchmark::State& state) {
  using abm::market::Side;
  const auto n = static_cast<std::size_t>(state.range(0));
  abm::Rng rng(1);
  std::vector<abm::market::Order> orders(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& o = orders[i];
    o.agent_id = static_cast<abm::market::AgentId>(rng.below(200));
    o.side = rng.below(2) ? Side::buy : Side::sell;
    o.quantity = 1 + static_cast<std::int64_t>(rng.below(50));
    o.limit_price = 0.01 * static_cast<double>(9900 + rng.below(201));
    o.submit_tick = static_cast<std::int64_t>(i);
  }
  std::vector<abm::market::Trade> trades;
  for (auto _ : state) {
    abm::market::LimitOrderBook book(0.01);
    trades.clear();
    for (const auto& o : orders) book.submit(o, trades);
    benchmark::DoNotOptimize(trades.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_OrderBookSubmit)->Arg(10000);

void BM_Simulation(benchmark::State& state) {
  abm::engine::TreatmentConfig cfg;
  cfg.n_days = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto rec = abm::engine::run_simulation(cfg, ++seed);
    benchmark::DoNotOptimize(rec.ticks.price.data());
  }
}
BENCHMARK(BM_Simulation)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Acf(benchmark::State& state) {
  const auto x = normals(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(abm::stats::sample_acf(x, 128).coeffs.data());
}
BENCHMARK(BM_Acf)->Arg(4096)->Arg(100800);

void BM_Hill(benchmark::State& state) {
  const auto x = pareto(100000, 3.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(abm::stats::hill_estimator(x, 0.05, abm::stats::Tail::right));
}
BENCHMARK(BM_Hill);

void BM_PowerLawFit(benchmark::State& state) {
  const auto x = pareto(static_cast<std::size_t>(state.range(0)), 1.5, 4);
  abm::stats::PowerLawOptions o;
  o.bootstrap_reps = 0;
  for (auto _ : state) benchmark::DoNotOptimize(abm::stats::fit_power_law(x, o).zeta);
}
BENCHMARK(BM_PowerLawFit)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PowerLawGof(benchmark::State& state) {
  const auto x = pareto(10000, 1.5, 5);
  abm::stats::PowerLawOptions o;
  o.bootstrap_reps = 0;
  const auto fit = abm::stats::fit_power_law(x, o);
  for (auto _ : state) benchmark::DoNotOptimize(abm::stats::power_law_gof(x, fit, 100, o).p_value);
}
BENCHMARK(BM_PowerLawGof)->Unit(benchmark::kMillisecond);

void BM_Garch(benchmark::State& state) {
  abm::Rng rng(6);
  std::vector<double> x;
  double var = 1.0, prev = 0.0;
  for (int t = 0; t < 10000; ++t) {
    var = 0.1 + 0.1 * prev * prev + 0.8 * var;
    prev = std::sqrt(var) * abm::standard_normal(rng);
    x.push_back(prev);
  }
  for (auto _ : state) benchmark::DoNotOptimize(abm::stats::garch_filter(x).alpha);
}
BENCHMARK(BM_Garch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
