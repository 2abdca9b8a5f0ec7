#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "aigiqa/assessor/image.hpp"
#include "aigiqa/assessor/model.hpp"
#include "aigiqa/assessor/text.hpp"
#include "aigiqa/subjective/mos.hpp"
#include "aigiqa/util/jsonl.hpp"

namespace aigiqa::assessor {

inline constexpr std::string_view kCheckpointFormat = "aigiqa-checkpoint/1";

struct CheckpointMeta {
  std::string method_label;  // e.g. "resnet18(PR)" or "stub(NR-TIER)"
  subjective::Dimension dimension = subjective::Dimension::Quality;
  PreprocessPolicy policy;
  std::optional<TextEncoderOptions> text;  // set iff text fusion is enabled
  std::string config_hash;
  std::uint64_t seed = 0;
  int epoch = 0;
  std::optional<double> eval_srcc;
  util::Json train_config = util::Json::object();
};

struct LoadedCheckpoint {
  Assessor model;
  CheckpointMeta meta;
  std::unique_ptr<TextEncoder> text_encoder;  // null without text fusion
};

// Method label in the benchmark-table style: "<backbone>(<NR|FR|PR>[-TIER])".
std::string method_label(std::string_view backbone, Fusion fusion, bool text);

/// JSON checkpoint: backbone identity (and weights when trainable, ONNX path
/// otherwise), fusion mode, text-encoder settings, head weights,
/// preprocessing policy, training config and its hash.
void save_checkpoint(const std::filesystem::path& path, const Assessor& model,
                     const CheckpointMeta& meta);
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace aigiqa::assessor
