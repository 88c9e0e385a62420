#include "report_tables.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <string>
#include <vector>

namespace abmval {

using abm::stats::FactEntry;
using abm::stats::FactGroup;
using abm::stats::FactReport;
using abm::stats::ScalarSummary;

namespace {

std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string count(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", v);
  return buf;
}

// A table accumulates rows of cells and prints them either aligned or as
// long-form CSV (group,table,row,column,value).
class Table {
 public:
  Table(std::string group, std::string title, std::vector<std::string> columns)
      : group_(std::move(group)), title_(std::move(title)), columns_(std::move(columns)) {}

  void row(std::string name, std::vector<std::string> cells) { rows_.emplace_back(std::move(name), std::move(cells)); }
  [[nodiscard]] bool empty() const { return rows_.empty(); }

  void print(Format format, std::ostream& out) const {
    if (rows_.empty()) return;
    if (format == Format::csv) {
      for (const auto& [name, cells] : rows_) {
        for (std::size_t i = 0; i < cells.size() && i < columns_.size(); ++i) {
          out << group_ << ',' << title_ << ',' << name << ',' << columns_[i] << ',' << cells[i] << '\n';
        }
      }
      return;
    }
    std::size_t first = 0;
    for (const auto& r : rows_) first = std::max(first, r.first.size());
    std::vector<std::size_t> width(columns_.size());
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      width[i] = columns_[i].size();
      for (const auto& r : rows_) {
        if (i < r.second.size()) width[i] = std::max(width[i], r.second[i].size());
      }
    }
    out << title_ << " [" << group_ << "]\n";
    out << std::left << std::setw(static_cast<int>(first)) << "";
    for (std::size_t i = 0; i < columns_.size(); ++i) out << "  " << std::right << std::setw(static_cast<int>(width[i])) << columns_[i];
    out << '\n';
    for (const auto& [name, cells] : rows_) {
      out << std::left << std::setw(static_cast<int>(first)) << name;
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << "  " << std::right << std::setw(static_cast<int>(width[i])) << (i < cells.size() ? cells[i] : "");
      }
      out << '\n';
    }
    out << '\n';
  }

 private:
  std::string group_;
  std::string title_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::vector<std::string>>> rows_;
};

const ScalarSummary* scalar(const FactEntry* f, const std::string& key) {
  if (!f) return nullptr;
  const auto it = f->scalars.find(key);
  return it == f->scalars.end() ? nullptr : &it->second;
}

// mean, then median and quartiles only when there is dispersion to show.
std::vector<std::string> summary_cells(const ScalarSummary* s) {
  if (!s || s->n == 0) return {"", "", "", ""};
  const bool many = s->n > 1;
  return {fmt(s->mean), many ? fmt(s->median) : "", many ? fmt(s->q25) : "", many ? fmt(s->q75) : ""};
}

void moments_table(const FactGroup& g, Format format, std::ostream& out) {
  for (const char* freq : {"daily", "tick"}) {
    const auto* f = g.find(std::string("moments.") + freq);
    if (!f || !f->available) continue;
    Table t(g.name, std::string("Return moments (") + freq + ")", {"mean", "median", "q25", "q75"});
    for (const char* key : {"mean", "std", "skewness", "kurtosis", "min", "max"}) t.row(key, summary_cells(scalar(f, key)));
    t.print(format, out);
  }
}

void hill_table(const FactGroup& g, const std::string& id, const std::string& prefix, const std::string& title,
                Format format, std::ostream& out) {
  const auto* f = g.find(id);
  if (!f || !f->available) return;
  Table t(g.name, title, {"left mean", "left median", "right mean", "right median"});
  for (const char* pc : {"1", "2.5", "5", "10"}) {
    const auto* l = scalar(f, prefix + "left_" + pc);
    const auto* r = scalar(f, prefix + "right_" + pc);
    auto cell = [](const ScalarSummary* s, bool median) {
      if (!s || s->n == 0) return std::string();
      if (median && s->n < 2) return std::string();
      return fmt(median ? s->median : s->mean);
    };
    t.row(std::string(pc) + "%", {cell(l, false), cell(l, true), cell(r, false), cell(r, true)});
  }
  t.print(format, out);
}

void power_law_table(const FactGroup& g, Format format, std::ostream& out) {
  const auto* f = g.find("powerlaw.daily");
  if (!f || !f->available) return;
  Table t(g.name, "Power-law fits (daily)", {"zeta mean", "zeta median", "xmin mean", "p mean", "p>=0.05", "runs"});
  for (const char* name : abm::stats::kPowerLawSeries) {
    const std::string n = name;
    const auto* z = scalar(f, n + ".zeta");
    if (!z) continue;
    const auto* x = scalar(f, n + ".xmin");
    const auto* p = scalar(f, n + ".p");
    const auto* u = scalar(f, n + ".unrejected");
    t.row(n, {fmt(z->mean), z->n > 1 ? fmt(z->median) : "", x ? fmt(x->mean) : "", p ? fmt(p->mean) : "",
              u ? count(u->mean * static_cast<double>(u->n)) : "", count(static_cast<double>(z->n))});
  }
  t.print(format, out);
}

void duration_table(const FactGroup& g, Format format, std::ostream& out) {
  const auto* f = g.find("durations.tick");
  if (!f || !f->available) return;
  Table t(g.name, "Trade durations (ticks)", {"mean", "median", "q25", "q75"});
  for (const char* key : {"count", "mean", "std", "min", "max", "dispersion"}) t.row(key, summary_cells(scalar(f, key)));
  t.print(format, out);
}

void unit_root_table(const FactGroup& g, Format format, std::ostream& out) {
  for (const char* freq : {"daily", "tick"}) {
    const auto* f = g.find(std::string("unit_root.") + freq);
    if (!f || !f->available) continue;
    Table t(g.name, std::string("Unit-root tests on returns (") + freq + ")",
            {"stat min", "stat max", "p min", "p max", "cv 5%", "rejections", "runs"});
    for (const char* test : {"adf", "pp", "kpss"}) {
      const std::string n = test;
      const auto* s = scalar(f, n + ".stat");
      if (!s) continue;
      const auto* p = scalar(f, n + ".p");
      const auto* cv = scalar(f, n + ".cv");
      const auto* r = scalar(f, n + ".reject");
      t.row(n, {fmt(s->min), fmt(s->max), p ? fmt(p->min) : "", p ? fmt(p->max) : "", cv ? fmt(cv->mean) : "",
                r ? count(r->mean * static_cast<double>(r->n)) : "", count(static_cast<double>(s->n))});
    }
    t.print(format, out);
  }
}

void verdict_table(const FactGroup& g, Format format, std::ostream& out) {
  Table t(g.name, "Stylised facts", {"holds", "computed", "failed", "rule"});
  for (const auto& f : g.facts) {
    if (!f.available) {
      t.row(f.id, {"n/a", "0", count(static_cast<double>(f.failed)), f.note});
      continue;
    }
    const auto computed = f.runs.empty() ? g.labels.size() - f.failed : f.runs.size() - f.failed;
    t.row(f.id, {f.verdict.holds ? "yes" : "no", count(static_cast<double>(computed)), count(static_cast<double>(f.failed)),
                 format == Format::csv ? "\"" + f.verdict.rule + "\"" : f.verdict.rule});
  }
  t.print(format, out);
}

}  // namespace

void print_report(const FactReport& report, Format format, std::ostream& out) {
  if (format == Format::csv) out << "group,table,row,column,value\n";
  for (const auto& g : report.groups) {
    if (format == Format::text) out << "== " << g.name << " (" << g.labels.size() << " runs) ==\n\n";
    moments_table(g, format, out);
    hill_table(g, "hill.daily", "", "Hill tail index (daily)", format, out);
    hill_table(g, "hill.tick", "", "Hill tail index (tick)", format, out);
    hill_table(g, "conditional.daily", "student_t.", "Hill index of GARCH-t residuals (daily)", format, out);
    hill_table(g, "conditional.daily", "gaussian.", "Hill index of GARCH-Gaussian residuals (daily)", format, out);
    power_law_table(g, format, out);
    duration_table(g, format, out);
    unit_root_table(g, format, out);
    verdict_table(g, format, out);
  }
  if (format == Format::text) {
    for (const auto& e : report.input_errors) out << "input error: " << e << '\n';
  }
}

}  // namespace abmval
