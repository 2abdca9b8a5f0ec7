#include "aigiqa/metrics/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aigiqa::metrics {
namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw UndefinedCorrelation("correlation undefined: a score vector has zero variance");
  }
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

bool has_ties(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

}  // namespace

ScorePairSet::ScorePairSet(std::vector<double> truth, std::vector<double> predicted)
    : truth_(std::move(truth)), predicted_(std::move(predicted)) {
  if (truth_.size() != predicted_.size()) {
    throw std::invalid_argument("score pairs: truth and predicted lengths differ");
  }
  if (truth_.size() < 2) throw std::invalid_argument("score pairs: need at least two pairs");
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(truth_.begin(), truth_.end(), finite) ||
      !std::all_of(predicted_.begin(), predicted_.end(), finite)) {
    throw std::invalid_argument("score pairs: non-finite value");
  }
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j; their mean is (i + 1 + j) / 2.
    const double rank = (static_cast<double>(i) + 1.0 + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double plcc(const ScorePairSet& pairs) { return pearson(pairs.truth(), pairs.predicted()); }

double srcc(const ScorePairSet& pairs) {
  const auto rt = average_ranks(pairs.truth());
  const auto rp = average_ranks(pairs.predicted());
  return pearson(rt, rp);
}

double srcc_rank_difference(const ScorePairSet& pairs) {
  if (has_ties(pairs.truth()) || has_ties(pairs.predicted())) {
    throw std::invalid_argument("rank-difference SRCC requires tie-free scores");
  }
  const auto rt = average_ranks(pairs.truth());
  const auto rp = average_ranks(pairs.predicted());
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < rt.size(); ++i) sum_sq += (rt[i] - rp[i]) * (rt[i] - rp[i]);
  const auto n = static_cast<double>(rt.size());
  return 1.0 - 6.0 * sum_sq / (n * (n * n - 1.0));
}

}  // namespace aigiqa::metrics
