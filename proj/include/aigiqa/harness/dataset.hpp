#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <opencv2/core.hpp>

#include "aigiqa/assessor/image.hpp"
#include "aigiqa/assessor/model.hpp"
#include "aigiqa/assessor/text.hpp"
#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/subjective/labels.hpp"

namespace aigiqa::harness {

class MissingLabelsError : public std::runtime_error {
 public:
  MissingLabelsError(subjective::Dimension dimension, std::vector<std::string> image_ids);
  const std::vector<std::string>& image_ids() const { return image_ids_; }

 private:
  std::vector<std::string> image_ids_;
};

// FR fusion needs a reference for every sample.
class IncompatibleFusionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DatasetOptions {
  assessor::Fusion fusion = assessor::Fusion::NR;
  assessor::PreprocessPolicy policy;
  assessor::Normalization normalization;
  const assessor::TextEncoder* text = nullptr;  // null: no text features
};

/// Decoded, resized images of a list of records, turned into model batches on
/// demand. Only the labels of the requested dimension are looked up.
class Dataset {
 public:
  Dataset(const corpus::Corpus& corpus, std::span<const std::string> image_ids,
          DatasetOptions options);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  assessor::Batch batch(std::span<const std::size_t> indices, assessor::Mode mode,
                        util::Rng& rng) const;

  // Labels of every sample, in order. Throws MissingLabelsError listing the
  // ids without a label for `dimension`.
  Eigen::VectorXd labels(const subjective::LabelTable& table,
                         subjective::Dimension dimension) const;

 private:
  struct Sample {
    cv::Mat generated;
    std::optional<cv::Mat> reference;
    Eigen::VectorXd text;
  };

  std::vector<std::string> ids_;
  std::vector<Sample> samples_;
  DatasetOptions options_;
};

// Records of `ids` without a reference; FR needs this list to be empty.
std::vector<std::string> without_reference(const corpus::Corpus& corpus,
                                           std::span<const std::string> ids);

}  // namespace aigiqa::harness
