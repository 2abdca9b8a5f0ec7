#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aigiqa/util/jsonl.hpp"

namespace aigiqa::corpus {

enum class Subset { T2I, I2I };

std::string_view to_string(Subset subset);
Subset parse_subset(std::string_view text);

/// One generated image with its prompts and provenance.
///
/// `image_prompt_path` is the image given to an image-to-image generator; it
/// doubles as the reference image for full- and partial-reference assessment.
/// A record carries one iff it belongs to the I2I subset.
struct AigiRecord {
  std::string image_id;
  std::filesystem::path image_path;
  std::string generator;
  std::string category;
  std::string text_prompt;
  std::optional<std::filesystem::path> image_prompt_path;
  Subset subset = Subset::T2I;

  bool has_reference() const { return image_prompt_path.has_value(); }
};

/// Validation failure. `record_id` names the offending record when one is
/// identifiable (it is empty for file-level failures).
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::string record_id, const std::string& message)
      : std::runtime_error(message), record_id_(std::move(record_id)) {}

  const std::string& record_id() const { return record_id_; }

 private:
  std::string record_id_;
};

struct IngestOptions {
  // Decode every referenced image. Disable only for dry runs over manifests
  // whose images live elsewhere.
  bool check_images = true;
};

/// Immutable, validated collection of records. Safe to share across readers.
class Corpus {
 public:
  // Validates every record and the cross-record invariants (unique ids).
  static Corpus build(std::vector<AigiRecord> records, const IngestOptions& options = {});

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::span<const AigiRecord> records() const { return records_; }

  const AigiRecord* find(std::string_view image_id) const;
  const AigiRecord& at(std::string_view image_id) const;

  bool has_subset(Subset subset) const;

  // Records of one subset, in corpus order.
  Corpus filter(Subset subset) const;

 private:
  Corpus() = default;

  std::vector<AigiRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Manifest: UTF-8, one JSON object per line with the AigiRecord fields.
// Relative paths resolve against the manifest's directory.
Corpus ingest(const std::filesystem::path& manifest_path, const IngestOptions& options = {});

AigiRecord record_from_json(const util::Json& json, const std::filesystem::path& base_dir);
util::Json record_to_json(const AigiRecord& record);

void write_manifest(const std::filesystem::path& path, std::span<const AigiRecord> records);

}  // namespace aigiqa::corpus
