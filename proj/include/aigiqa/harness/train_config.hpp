#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aigiqa/assessor/backbone.hpp"
#include "aigiqa/assessor/model.hpp"
#include "aigiqa/assessor/text.hpp"
#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/subjective/mos.hpp"
#include "aigiqa/util/config.hpp"

namespace aigiqa::harness {

/// Which records an experiment covers.
enum class Scope { Full, T2I, I2I };

std::string_view to_string(Scope scope);  // "full", "T2IQA", "I2IQA"
Scope parse_scope(std::string_view text);
std::optional<corpus::Subset> subset_of(Scope scope);

/// Training setup. Defaults are the reference optimization settings: Adam,
/// lr 1e-4, weight decay 1e-5, batch 8 for training and 20 for testing.
///
/// Config-file keys are the member names; AIGIQA_<KEY> environment variables
/// override file values.
struct TrainConfig {
  std::string backbone = "stub";
  assessor::Fusion fusion = assessor::Fusion::NR;
  bool text = false;
  subjective::Dimension dimension = subjective::Dimension::Quality;
  Scope scope = Scope::Full;

  int train_batch_size = 8;
  int eval_batch_size = 20;
  double learning_rate = 1e-4;
  double weight_decay = 1e-5;
  int epochs = 50;
  std::uint64_t seed = 0;
  std::string device = "cpu";
  bool freeze_backbone = false;

  // Backbone construction.
  int stub_feature_dim = 512;
  int stub_grid = 8;
  std::string model_path;            // ONNX export for pretrained backbones
  std::optional<int> feature_dim;    // override for custom ONNX graphs
  int input_size = 224;              // stub / custom ONNX only

  // Text fusion.
  std::string text_encoder = "hashing";
  int text_dim = 768;
  std::string text_features;         // precomputed embeddings file

  bool operator==(const TrainConfig&) const = default;

  static TrainConfig from_config(const util::KeyValueConfig& config);
  util::KeyValueConfig to_config() const;

  // Hex digest of the canonical serialization.
  std::string hash() const;

  // Throws std::invalid_argument on an invalid combination.
  void validate() const;

  assessor::BackboneOptions backbone_options() const;
  std::optional<assessor::TextEncoderOptions> text_options() const;
};

}  // namespace aigiqa::harness
