#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace aigiqa::metrics {

// Raised when a correlation is undefined because one vector has zero
// variance (all values tied). Never silently mapped to 0.
class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Paired ground-truth / predicted scores. Construction enforces equal
/// lengths, N >= 2 and finite values (std::invalid_argument otherwise).
class ScorePairSet {
 public:
  ScorePairSet(std::vector<double> truth, std::vector<double> predicted);

  std::span<const double> truth() const { return truth_; }
  std::span<const double> predicted() const { return predicted_; }
  std::size_t size() const { return truth_.size(); }

 private:
  std::vector<double> truth_;
  std::vector<double> predicted_;
};

// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson linear correlation of the raw scores.
double plcc(const ScorePairSet& pairs);

// Spearman rank correlation: Pearson correlation of average ranks. Equals
// 1 - 6 sum(d^2) / (N (N^2 - 1)) whenever there are no ties.
double srcc(const ScorePairSet& pairs);

// The closed rank-difference form above. Only valid without ties; throws
// std::invalid_argument if either vector has a tie.
double srcc_rank_difference(const ScorePairSet& pairs);

}  // namespace aigiqa::metrics
