// abmval: run simulation batches, validate stylised facts, print reports.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "abm/engine/config.hpp"
#include "abm/engine/output.hpp"
#include "abm/engine/simulation.hpp"
#include "abm/stats/battery.hpp"
#include "abm/version.hpp"
#include "json.hpp"
#include "report_tables.hpp"

namespace fs = std::filesystem;
namespace engine = abm::engine;
namespace stats = abm::stats;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string run_dir_name(int run) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "run_%04d", run);
  return buf;
}

struct SimulateArgs {
  std::string config;
  int runs{1};
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads{0};
};

int cmd_simulate(const SimulateArgs& a) {
  std::vector<engine::TreatmentConfig> treatments;
  try {
    treatments = engine::load_config(a.config);
    for (auto& t : treatments) {
      if (a.seed) t.master_seed = *a.seed;
      t.validate();
    }
    engine::check_comparable(treatments);
  } catch (const std::exception& e) {
    std::cerr << "abmval simulate: config error: " << e.what() << '\n';
    return kUsage;
  }
  if (a.runs < 1) {
    std::cerr << "abmval simulate: --runs must be >= 1\n";
    return kUsage;
  }

  try {
    const fs::path out(a.out);
    fs::create_directories(out);
    const std::string started = utc_now();
    std::atomic<int> done{0};
    const int total = a.runs * static_cast<int>(treatments.size());
    engine::for_each_run(
        treatments, a.runs,
        [&](std::size_t t, int run, engine::SimulationRecord&& rec) {
          engine::write_run(rec, out / treatments[t].name / run_dir_name(run), abm::kVersion);
          const int n = ++done;
          std::cerr << "\r" << n << "/" << total << " runs" << std::flush;
        },
        a.threads);
    std::cerr << '\n';

    nlohmann::ordered_json batch;
    batch["tool_version"] = abm::kVersion;
    batch["config_file"] = fs::absolute(a.config).string();
    batch["started"] = started;
    batch["finished"] = utc_now();
    batch["runs"] = a.runs;
    auto tj = nlohmann::ordered_json::array();
    for (const auto& t : treatments) {
      nlohmann::ordered_json j;
      j["name"] = t.name;
      j["config_hash"] = engine::config_hash(t);
      j["master_seed"] = t.master_seed;
      auto runs = nlohmann::ordered_json::array();
      for (int r = 0; r < a.runs; ++r) {
        runs.push_back({{"run_index", r},
                        {"seed", engine::run_seed(t.master_seed, r)},
                        {"path", (fs::path(t.name) / run_dir_name(r)).string()}});
      }
      j["runs"] = std::move(runs);
      tj.push_back(std::move(j));
    }
    batch["treatments"] = std::move(tj);
    std::ofstream(out / "batch.json") << batch.dump(1) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "abmval simulate: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

struct ValidateArgs {
  std::string in;
  std::string facts{"all"};
  std::string out;
  int synth{1000};
  unsigned threads{0};
  bool compact{false};
};

// Run directories (those holding daily.csv) below root, sorted by path.
std::vector<fs::path> find_runs(const fs::path& root) {
  if (fs::exists(root / "daily.csv")) return {root};
  std::vector<fs::path> dirs;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename() == "daily.csv") dirs.push_back(e.path().parent_path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

int cmd_validate(const ValidateArgs& a) {
  stats::BatteryConfig cfg;
  cfg.power_law_synth = a.synth;
  cfg.threads = a.threads;
  if (a.facts != "all") {
    std::stringstream ss(a.facts);
    std::string item;
    const auto& known = stats::fact_selectors();
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (std::find(known.begin(), known.end(), item) == known.end()) {
        std::string list;
        for (const auto& k : known) list += (list.empty() ? "" : ",") + k;
        std::cerr << "abmval validate: unknown fact '" << item << "' (known: " << list << ")\n";
        return kUsage;
      }
      cfg.facts.insert(item);
    }
  }

  const fs::path in(a.in);
  if (!fs::exists(in)) {
    std::cerr << "abmval validate: input '" << a.in << "' does not exist\n";
    return kUsage;
  }
  const bool single_csv = fs::is_regular_file(in);
  const std::vector<fs::path> inputs = single_csv ? std::vector<fs::path>{in} : find_runs(in);
  if (inputs.empty()) {
    std::cerr << "abmval validate: no run directories (daily.csv) under '" << a.in << "'\n";
    return kRuntime;
  }

  // Load and reduce each input in the worker that reads it, so only the
  // per-run fact values stay in memory.
  struct Slot {
    std::string group, label, error;
    stats::RunFacts facts;
  };
  std::vector<Slot> slots(inputs.size());
  unsigned threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(inputs.size()));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex log;
  stats::BatteryConfig run_cfg = cfg;
  run_cfg.threads = 1;
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        const auto s = single_csv ? stats::load_daily_csv(inputs[i]) : stats::load_run_directory(inputs[i]);
        slots[i].group = s.group;
        slots[i].label = s.label;
        slots[i].facts = stats::compute_run_facts(s, run_cfg);
      } catch (const std::exception& e) {
        slots[i].error = inputs[i].string() + ": " + e.what();
      }
      const auto n = ++done;
      std::lock_guard lock(log);
      std::cerr << "\r" << n << "/" << inputs.size() << " series" << std::flush;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::cerr << '\n';

  stats::FactReport report;
  report.tool_version = abm::kVersion;
  std::vector<std::string> order;
  for (const auto& s : slots) {
    if (!s.error.empty()) {
      report.input_errors.push_back(s.error);
      std::cerr << "abmval validate: " << s.error << '\n';
    } else if (std::find(order.begin(), order.end(), s.group) == order.end()) {
      order.push_back(s.group);
    }
  }
  if (order.empty()) {
    std::cerr << "abmval validate: no input could be read\n";
    return kRuntime;
  }
  for (const auto& name : order) {
    std::vector<std::string> labels;
    std::vector<stats::RunFacts> runs;
    for (auto& s : slots) {
      if (!s.error.empty() || s.group != name) continue;
      labels.push_back(s.label);
      runs.push_back(std::move(s.facts));
    }
    report.groups.push_back(stats::aggregate_group(name, std::move(labels), std::move(runs), cfg));
  }

  try {
    const fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f << stats::to_json(report, !a.compact) << '\n';
    const auto csv_dir = out.parent_path() / (out.stem().string() + "_csv");
    stats::write_fact_csvs(report, csv_dir);
  } catch (const std::exception& e) {
    std::cerr << "abmval validate: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int cmd_report(const std::string& in, const std::string& format) {
  std::ifstream f(in);
  if (!f) {
    std::cerr << "abmval report: cannot open '" << in << "'\n";
    return kUsage;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    const auto report = stats::report_from_json(buf.str());
    abmval::print_report(report, format == "csv" ? abmval::Format::csv : abmval::Format::text, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "abmval " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based market simulator and stylised-fact validator"};
  app.set_version_flag("--version", abm::kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run every treatment of a config file N times");
  simulate->add_option("--config", sim.config, "Config file")->required();
  simulate->add_option("--runs", sim.runs, "Runs per treatment")->default_val(1);
  auto* seed_opt = simulate->add_option("--seed", seed, "Master seed (overrides master_seed in the config)");
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--threads", sim.threads, "Worker threads, 0 = all cores")->default_val(0);

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Run the stylised-fact battery over runs or a CSV");
  validate->add_option("--in", val.in, "Run directory tree or a daily CSV file")->required();
  validate->add_option("--facts", val.facts, "Comma-separated fact selectors, or 'all'")->default_val("all");
  validate->add_option("--out", val.out, "Report JSON path")->required();
  validate->add_option("--synth", val.synth, "Synthetic sets for the power-law p-value")->default_val(1000);
  validate->add_option("--threads", val.threads, "Worker threads, 0 = all cores")->default_val(0);
  validate->add_flag("--compact", val.compact, "Leave per-run values out of the JSON");

  std::string report_in, report_format = "text";
  auto* report = app.add_subcommand("report", "Print tables from a report JSON");
  report->add_option("--in", report_in, "Report JSON")->required();
  report->add_option("--format", report_format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->default_val("text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*simulate) {
    if (*seed_opt) sim.seed = seed;
    return cmd_simulate(sim);
  }
  if (*validate) return cmd_validate(val);
  return cmd_report(report_in, report_format);
}
