#pragma once

#include <map>
#include <string>
#include <vector>

#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/subjective/labels.hpp"
#include "aigiqa/util/jsonl.hpp"

namespace aigiqa::harness {

/// Fixed-width histogram over [lo, hi]. Bin k covers [edge_k, edge_k+1); the
/// last bin also takes hi.
class Histogram {
 public:
  Histogram(double lo, double hi, double bin_width);

  void add(double value);  // throws std::out_of_range outside [lo, hi]
  std::size_t bin_of(double value) const;

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t total() const { return total_; }
  double mean() const { return total_ ? sum_ / static_cast<double>(total_) : 0.0; }

 private:
  double lo_;
  double width_;
  std::vector<double> edges_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
  double sum_ = 0.0;
};

struct DimensionSummary {
  Histogram global;
  std::map<std::string, Histogram> by_subset;     // "T2I" / "I2I"
  std::map<std::string, Histogram> by_generator;
  std::map<std::string, double> generator_means;
};

struct MosSummary {
  double bin_width = 0.25;
  std::map<subjective::Dimension, DimensionSummary> dimensions;
  std::vector<std::string> unmatched;  // label ids absent from the corpus
};

// Labels of images missing from the corpus count only in `unmatched`.
MosSummary mos_summary(const subjective::LabelTable& labels, const corpus::Corpus& corpus,
                       double bin_width = 0.25);

util::Json to_json(const MosSummary& summary);

}  // namespace aigiqa::harness
