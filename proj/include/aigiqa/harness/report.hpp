#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aigiqa/harness/evaluate.hpp"

namespace aigiqa::harness {

struct ReportCell {
  double srcc = 0.0;
  double plcc = 0.0;
  std::size_t n = 0;
  std::string checkpoint;
  std::string split;
  std::string labels;
};

struct ReportRow {
  std::string method;
  std::string backbone;
  std::map<subjective::Dimension, ReportCell> cells;
};

enum class Metric { SRCC, PLCC };

/// Benchmark table for one scope: one row per (method, backbone), SRCC and
/// PLCC columns per dimension.
struct BenchmarkReport {
  Scope scope = Scope::Full;
  std::vector<ReportRow> rows;  // first-appearance order

  // Dimensions with at least one cell, in canonical order.
  std::vector<subjective::Dimension> dimensions() const;
  std::size_t metric_columns() const { return 2 * dimensions().size(); }
  // 1 for the best value of the column (ties share), 2 for the next distinct
  // value, nullopt otherwise or for a missing cell.
  std::optional<int> rank(std::size_t row, subjective::Dimension dimension,
                          Metric metric) const;
};

// Groups evaluations by scope (full, T2IQA, I2IQA order). Throws
// std::invalid_argument for no evaluations or two for the same cell.
std::vector<BenchmarkReport> build_reports(std::span<const Evaluation> evaluations);

// Markdown table; best values in bold, second best in italics.
std::string render_markdown(const BenchmarkReport& report);

util::Json report_row_json(const BenchmarkReport& report, std::size_t row);

// Writes <stem>.jsonl (one line per row, all scopes) and <stem>.md.
void write_reports(const std::filesystem::path& stem, std::span<const BenchmarkReport> reports);

}  // namespace aigiqa::harness
