#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aigiqa/subjective/mos.hpp"
#include "aigiqa/util/jsonl.hpp"

namespace aigiqa::subjective {

// Recorded in every label line: ratings of one image form one rejection group
// regardless of the stage they were collected in.
inline constexpr std::string_view kRejectionScope = "per_image";

util::Json label_to_json(const MosLabel& label);
MosLabel label_from_json(const util::Json& json);

util::Json event_to_json(const RatingEvent& event);
RatingEvent event_from_json(const util::Json& json);

void write_labels(const std::filesystem::path& path, std::span<const MosLabel> labels);
std::vector<MosLabel> read_labels(const std::filesystem::path& path);

// Reads a rating store file (no durability semantics; see rating::RatingStore).
std::vector<RatingEvent> read_events(const std::filesystem::path& path);

/// (image, dimension) -> MOS lookup.
class LabelTable {
 public:
  LabelTable() = default;
  explicit LabelTable(std::span<const MosLabel> labels);

  std::optional<double> mos(std::string_view image_id, Dimension dimension) const;
  bool contains(std::string_view image_id, Dimension dimension) const {
    return mos(image_id, dimension).has_value();
  }
  const std::vector<MosLabel>& labels() const { return labels_; }

 private:
  std::vector<MosLabel> labels_;
  std::map<std::pair<std::string, Dimension>, double, std::less<>> index_;
};

}  // namespace aigiqa::subjective
