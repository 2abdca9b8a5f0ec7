#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aigiqa/corpus/split.hpp"
#include "aigiqa/harness/predictor.hpp"
#include "aigiqa/harness/train_config.hpp"
#include "aigiqa/subjective/labels.hpp"
#include "aigiqa/util/jsonl.hpp"

namespace aigiqa::harness {

class DimensionMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One SRCC/PLCC cell together with the artifacts it was computed from.
struct Evaluation {
  std::string method;
  std::string backbone;
  Scope scope = Scope::Full;
  subjective::Dimension dimension = subjective::Dimension::Quality;
  double srcc = 0.0;
  double plcc = 0.0;
  std::size_t n = 0;
  std::string checkpoint;
  std::string split;
  std::string labels;

  bool operator==(const Evaluation&) const = default;
};

util::Json evaluation_to_json(const Evaluation& e);
Evaluation evaluation_from_json(const util::Json& json);
void write_evaluations(const std::filesystem::path& path, std::span<const Evaluation> evals);
std::vector<Evaluation> read_evaluations(const std::filesystem::path& path);

struct EvaluateOptions {
  Scope scope = Scope::Full;
  corpus::Fold fold = corpus::Fold::Test;
  // Empty: every dimension the predictor covers.
  std::vector<subjective::Dimension> dimensions;
  std::string split_source;   // provenance only
  std::string labels_source;  // provenance only
};

/// Scores the chosen fold of the scoped corpus and correlates with the MOS
/// labels, one Evaluation per dimension.
///
/// Throws std::invalid_argument for an empty fold, DimensionMismatchError
/// when a requested dimension has no checkpoint, MissingLabelsError when a
/// fold image lacks a label, metrics::UndefinedCorrelation for constant
/// scores.
std::vector<Evaluation> evaluate(const QualityPredictor& predictor,
                                 const corpus::Corpus& corpus, const corpus::Split& split,
                                 const subjective::LabelTable& labels,
                                 const EvaluateOptions& options = {});

}  // namespace aigiqa::harness
