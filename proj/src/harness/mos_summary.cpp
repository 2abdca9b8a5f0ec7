#include "aigiqa/harness/mos_summary.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "aigiqa/subjective/mos.hpp"

namespace aigiqa::harness {

Histogram::Histogram(double lo, double hi, double bin_width) : lo_(lo), width_(bin_width) {
  if (!(bin_width > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("histogram needs hi > lo and a positive bin width");
  }
  const auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
  for (std::size_t k = 0; k <= bins; ++k) {
    edges_.push_back(std::min(hi, lo + static_cast<double>(k) * bin_width));
  }
  counts_.assign(bins, 0);
}

std::size_t Histogram::bin_of(double value) const {
  if (!(value >= edges_.front() && value <= edges_.back())) {
    throw std::out_of_range("histogram value " + std::to_string(value) + " outside range");
  }
  const auto k = static_cast<std::size_t>(std::floor((value - lo_) / width_));
  return std::min(k, counts_.size() - 1);
}

void Histogram::add(double value) {
  ++counts_[bin_of(value)];
  ++total_;
  sum_ += value;
}

MosSummary mos_summary(const subjective::LabelTable& labels, const corpus::Corpus& corpus,
                       double bin_width) {
  using subjective::kMaxScore;
  using subjective::kMinScore;
  const Histogram empty(kMinScore, kMaxScore, bin_width);
  MosSummary summary;
  summary.bin_width = bin_width;
  std::set<std::string> unmatched;
  for (const auto& label : labels.labels()) {
    const auto* record = corpus.find(label.image_id);
    if (!record) {
      unmatched.insert(label.image_id);
      continue;
    }
    auto [it, _] = summary.dimensions.try_emplace(label.dimension, DimensionSummary{empty, {}, {}, {}});
    auto& dim = it->second;
    dim.global.add(label.mos);
    dim.by_subset.try_emplace(std::string(corpus::to_string(record->subset)), empty)
        .first->second.add(label.mos);
    dim.by_generator.try_emplace(record->generator, empty).first->second.add(label.mos);
  }
  for (auto& [_, dim] : summary.dimensions) {
    for (const auto& [generator, hist] : dim.by_generator) {
      dim.generator_means[generator] = hist.mean();
    }
  }
  summary.unmatched.assign(unmatched.begin(), unmatched.end());
  return summary;
}

namespace {

util::Json histogram_json(const Histogram& h) {
  return {{"edges", h.edges()}, {"counts", h.counts()}, {"total", h.total()}, {"mean", h.mean()}};
}

}  // namespace

util::Json to_json(const MosSummary& summary) {
  util::Json dims = util::Json::object();
  for (const auto& [d, s] : summary.dimensions) {
    util::Json subsets = util::Json::object();
    for (const auto& [k, h] : s.by_subset) subsets[k] = histogram_json(h);
    util::Json generators = util::Json::object();
    for (const auto& [k, h] : s.by_generator) generators[k] = histogram_json(h);
    dims[std::string(subjective::to_string(d))] = {{"global", histogram_json(s.global)},
                                                   {"by_subset", subsets},
                                                   {"by_generator", generators},
                                                   {"generator_means", s.generator_means}};
  }
  return {{"bin_width", summary.bin_width},
          {"dimensions", dims},
          {"unmatched_labels", summary.unmatched}};
}

}  // namespace aigiqa::harness
