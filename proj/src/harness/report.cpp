#include "aigiqa/harness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace aigiqa::harness {
namespace {

double value_of(const ReportCell& cell, Metric metric) {
  return metric == Metric::SRCC ? cell.srcc : cell.plcc;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::vector<subjective::Dimension> BenchmarkReport::dimensions() const {
  std::set<subjective::Dimension> dims;
  for (const auto& row : rows) {
    for (const auto& [d, _] : row.cells) dims.insert(d);
  }
  return {dims.begin(), dims.end()};
}

std::optional<int> BenchmarkReport::rank(std::size_t row, subjective::Dimension dimension,
                                         Metric metric) const {
  const auto it = rows.at(row).cells.find(dimension);
  if (it == rows.at(row).cells.end()) return std::nullopt;
  std::set<double, std::greater<>> values;
  for (const auto& r : rows) {
    if (const auto c = r.cells.find(dimension); c != r.cells.end()) {
      values.insert(value_of(c->second, metric));
    }
  }
  const double v = value_of(it->second, metric);
  auto pos = values.begin();
  if (*pos == v) return 1;
  ++pos;
  if (pos != values.end() && *pos == v) return 2;
  return std::nullopt;
}

std::vector<BenchmarkReport> build_reports(std::span<const Evaluation> evaluations) {
  if (evaluations.empty()) throw std::invalid_argument("report needs at least one evaluation");
  std::vector<BenchmarkReport> reports;
  for (const Scope scope : {Scope::Full, Scope::T2I, Scope::I2I}) {
    BenchmarkReport report;
    report.scope = scope;
    for (const auto& e : evaluations) {
      if (e.scope != scope) continue;
      auto row = std::find_if(report.rows.begin(), report.rows.end(), [&](const ReportRow& r) {
        return r.method == e.method && r.backbone == e.backbone;
      });
      if (row == report.rows.end()) {
        report.rows.push_back({e.method, e.backbone, {}});
        row = report.rows.end() - 1;
      }
      const bool inserted =
          row->cells.emplace(e.dimension,
                             ReportCell{e.srcc, e.plcc, e.n, e.checkpoint, e.split, e.labels})
              .second;
      if (!inserted) {
        throw std::invalid_argument("two evaluations for " + e.method + " / " +
                                    std::string(subjective::to_string(e.dimension)) + " in " +
                                    std::string(to_string(scope)) +
                                    "; report each seed or run separately");
      }
    }
    if (!report.rows.empty()) reports.push_back(std::move(report));
  }
  return reports;
}

std::string render_markdown(const BenchmarkReport& report) {
  const auto dims = report.dimensions();
  std::string out = "### Scope: " + std::string(to_string(report.scope)) + "\n\n";
  out += "| Method | Backbone |";
  for (const auto d : dims) {
    const std::string name(subjective::to_string(d));
    out += " " + name + " SRCC | " + name + " PLCC |";
  }
  out += "\n|---|---|";
  for (std::size_t i = 0; i < dims.size(); ++i) out += "---:|---:|";
  out += "\n";
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const auto& row = report.rows[r];
    out += "| " + row.method + " | " + row.backbone + " |";
    for (const auto d : dims) {
      for (const Metric m : {Metric::SRCC, Metric::PLCC}) {
        const auto cell = row.cells.find(d);
        if (cell == row.cells.end()) {
          out += " - |";
          continue;
        }
        std::string text = fixed4(value_of(cell->second, m));
        const auto rank = report.rank(r, d, m);
        if (rank == 1) text = "**" + text + "**";
        if (rank == 2) text = "*" + text + "*";
        out += " " + text + " |";
      }
    }
    out += "\n";
  }
  return out;
}

util::Json report_row_json(const BenchmarkReport& report, std::size_t r) {
  const auto& row = report.rows.at(r);
  util::Json cells = util::Json::object();
  for (const auto& [d, c] : row.cells) {
    const auto rank_json = [&](Metric m) {
      const auto rank = report.rank(r, d, m);
      return rank ? util::Json(*rank) : util::Json(nullptr);
    };
    cells[std::string(subjective::to_string(d))] = {
        {"srcc", c.srcc},          {"plcc", c.plcc},
        {"srcc_rank", rank_json(Metric::SRCC)},
        {"plcc_rank", rank_json(Metric::PLCC)},
        {"n", c.n},                {"checkpoint", c.checkpoint},
        {"split", c.split},        {"labels", c.labels}};
  }
  return {{"scope", to_string(report.scope)},
          {"method", row.method},
          {"backbone", row.backbone},
          {"cells", cells}};
}

void write_reports(const std::filesystem::path& stem, std::span<const BenchmarkReport> reports) {
  std::vector<util::Json> lines;
  std::string md;
  for (const auto& report : reports) {
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
      lines.push_back(report_row_json(report, r));
    }
    if (!md.empty()) md += "\n";
    md += render_markdown(report);
  }
  auto jsonl = stem;
  jsonl += ".jsonl";
  util::write_jsonl(jsonl, lines);
  auto mdpath = stem;
  mdpath += ".md";
  std::ofstream out(mdpath, std::ios::trunc);
  out << md;
  if (!out) throw std::runtime_error("cannot write " + mdpath.string());
}

}  // namespace aigiqa::harness
