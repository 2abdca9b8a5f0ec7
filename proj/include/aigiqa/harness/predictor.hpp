#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aigiqa/assessor/checkpoint.hpp"
#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/subjective/mos.hpp"

namespace aigiqa::harness {

/// Anything that scores images per dimension: trained checkpoints, or
/// external methods whose scores were produced elsewhere.
class QualityPredictor {
 public:
  virtual ~QualityPredictor() = default;
  virtual std::string method_label() const = 0;
  virtual std::string backbone_name() const = 0;
  virtual std::vector<subjective::Dimension> dimensions() const = 0;
  // Where the scores for `dimension` come from (file path).
  virtual std::string source(subjective::Dimension dimension) const = 0;
  // One score per id, in order. Deterministic.
  virtual std::vector<double> predict(subjective::Dimension dimension,
                                      const corpus::Corpus& corpus,
                                      std::span<const std::string> ids) const = 0;
};

/// One checkpoint per dimension; all must share the method label.
class CheckpointPredictor final : public QualityPredictor {
 public:
  // Throws std::invalid_argument when labels differ or a dimension repeats.
  explicit CheckpointPredictor(std::span<const std::filesystem::path> checkpoints,
                               int eval_batch_size = 20);

  std::string method_label() const override { return label_; }
  std::string backbone_name() const override { return backbone_; }
  std::vector<subjective::Dimension> dimensions() const override;
  std::string source(subjective::Dimension dimension) const override;
  std::vector<double> predict(subjective::Dimension dimension, const corpus::Corpus& corpus,
                              std::span<const std::string> ids) const override;

 private:
  struct Entry {
    std::filesystem::path path;
    std::shared_ptr<assessor::LoadedCheckpoint> checkpoint;
  };
  std::string label_;
  std::string backbone_;
  int eval_batch_size_;
  std::map<subjective::Dimension, Entry> entries_;
};

/// Precomputed scores: JSONL lines {"image_id", "dimension", "score"}. A
/// label file (key "mos") is accepted too, which turns the ground truth into
/// an oracle predictor.
class ScoreTablePredictor final : public QualityPredictor {
 public:
  ScoreTablePredictor(std::string method_label, std::string backbone_name,
                      const std::filesystem::path& path);

  std::string method_label() const override { return label_; }
  std::string backbone_name() const override { return backbone_; }
  std::vector<subjective::Dimension> dimensions() const override;
  std::string source(subjective::Dimension) const override { return path_.string(); }
  // Throws std::out_of_range for an id without a score.
  std::vector<double> predict(subjective::Dimension dimension, const corpus::Corpus& corpus,
                              std::span<const std::string> ids) const override;

 private:
  std::string label_;
  std::string backbone_;
  std::filesystem::path path_;
  std::map<std::pair<std::string, subjective::Dimension>, double> scores_;
};

}  // namespace aigiqa::harness
