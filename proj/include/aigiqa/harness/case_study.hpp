#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aigiqa/corpus/split.hpp"
#include "aigiqa/harness/predictor.hpp"
#include "aigiqa/subjective/labels.hpp"
#include "aigiqa/util/jsonl.hpp"

namespace aigiqa::harness {

struct MethodPrediction {
  std::string method;
  std::map<subjective::Dimension, double> scores;
};

/// Predicted triples of several methods next to the ground-truth MOS for one
/// image.
struct CaseStudy {
  std::string image_id;
  corpus::Subset subset = corpus::Subset::T2I;
  std::string generator;
  std::string text_prompt;
  bool has_reference = false;
  std::map<subjective::Dimension, double> ground_truth;
  std::vector<MethodPrediction> predictions;
};

// Throws corpus::CorpusError for an unknown image, std::invalid_argument when
// the image is not in the test fold of `split` (if given), when no predictor
// is given, or when the predictors cover different dimension sets.
CaseStudy case_study(std::span<const QualityPredictor* const> predictors,
                     const corpus::Corpus& corpus, const subjective::LabelTable& labels,
                     const corpus::Split* split, const std::string& image_id);

util::Json to_json(const CaseStudy& study);

}  // namespace aigiqa::harness
