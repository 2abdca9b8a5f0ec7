#include "aigiqa/corpus/corpus.hpp"

#include <unordered_set>

#include "aigiqa/assessor/image.hpp"

namespace aigiqa::corpus {
namespace fs = std::filesystem;

std::string_view to_string(Subset subset) {
  return subset == Subset::I2I ? "I2I" : "T2I";
}

Subset parse_subset(std::string_view text) {
  if (text == "T2I" || text == "t2i") return Subset::T2I;
  if (text == "I2I" || text == "i2i") return Subset::I2I;
  throw std::invalid_argument("unknown subset `" + std::string(text) + "` (expected T2I or I2I)");
}

namespace {

std::string required_string(const util::Json& json, const char* key, const std::string& id) {
  const auto it = json.find(key);
  if (it == json.end() || !it->is_string()) {
    throw CorpusError(id, "record `" + id + "`: missing string field `" + key + "`");
  }
  return it->get<std::string>();
}

void validate_record(const AigiRecord& r, const IngestOptions& options) {
  if (r.image_id.empty()) throw CorpusError("", "record with empty image_id");
  const auto fail = [&](const std::string& what) {
    throw CorpusError(r.image_id, "record `" + r.image_id + "`: " + what);
  };
  if (r.generator.empty()) fail("empty generator");
  if (r.category.empty()) fail("empty category");
  if (r.subset == Subset::I2I && !r.image_prompt_path) {
    fail("subset I2I requires image_prompt_path");
  }
  if (r.subset == Subset::T2I && r.image_prompt_path) {
    fail("subset T2I must not carry image_prompt_path");
  }
  if (!fs::exists(r.image_path)) fail("image file missing: " + r.image_path.string());
  if (r.image_prompt_path && !fs::exists(*r.image_prompt_path)) {
    fail("image prompt file missing: " + r.image_prompt_path->string());
  }
  if (options.check_images) {
    try {
      (void)assessor::load_rgb(r.image_path);
      if (r.image_prompt_path) (void)assessor::load_rgb(*r.image_prompt_path);
    } catch (const assessor::ImageDecodeError& e) {
      fail(e.what());
    }
  }
}

}  // namespace

Corpus Corpus::build(std::vector<AigiRecord> records, const IngestOptions& options) {
  Corpus corpus;
  corpus.index_.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    validate_record(records[i], options);
    if (!corpus.index_.emplace(records[i].image_id, i).second) {
      throw CorpusError(records[i].image_id,
                        "duplicate image_id `" + records[i].image_id + "`");
    }
  }
  corpus.records_ = std::move(records);
  return corpus;
}

const AigiRecord* Corpus::find(std::string_view image_id) const {
  const auto it = index_.find(std::string(image_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

const AigiRecord& Corpus::at(std::string_view image_id) const {
  if (const auto* r = find(image_id)) return *r;
  throw CorpusError(std::string(image_id), "unknown image_id `" + std::string(image_id) + "`");
}

bool Corpus::has_subset(Subset subset) const {
  for (const auto& r : records_) {
    if (r.subset == subset) return true;
  }
  return false;
}

Corpus Corpus::filter(Subset subset) const {
  Corpus out;
  for (const auto& r : records_) {
    if (r.subset != subset) continue;
    out.index_.emplace(r.image_id, out.records_.size());
    out.records_.push_back(r);
  }
  return out;
}

AigiRecord record_from_json(const util::Json& json, const fs::path& base_dir) {
  if (!json.is_object()) throw CorpusError("", "manifest line is not a JSON object");
  AigiRecord r;
  const auto id_it = json.find("image_id");
  if (id_it == json.end() || !id_it->is_string()) {
    throw CorpusError("", "record without string image_id");
  }
  r.image_id = id_it->get<std::string>();
  const auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  r.image_path = resolve(required_string(json, "image_path", r.image_id));
  r.generator = required_string(json, "generator", r.image_id);
  r.category = required_string(json, "category", r.image_id);
  r.text_prompt = required_string(json, "text_prompt", r.image_id);
  if (const auto it = json.find("image_prompt_path"); it != json.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw CorpusError(r.image_id, "record `" + r.image_id + "`: image_prompt_path not a string");
    }
    r.image_prompt_path = resolve(it->get<std::string>());
  }
  try {
    r.subset = parse_subset(required_string(json, "subset", r.image_id));
  } catch (const std::invalid_argument& e) {
    throw CorpusError(r.image_id, "record `" + r.image_id + "`: " + e.what());
  }
  return r;
}

util::Json record_to_json(const AigiRecord& r) {
  util::Json json{{"image_id", r.image_id},
                  {"image_path", r.image_path.string()},
                  {"generator", r.generator},
                  {"category", r.category},
                  {"text_prompt", r.text_prompt},
                  {"subset", to_string(r.subset)}};
  if (r.image_prompt_path) json["image_prompt_path"] = r.image_prompt_path->string();
  return json;
}

Corpus ingest(const fs::path& manifest_path, const IngestOptions& options) {
  if (!fs::exists(manifest_path)) {
    throw CorpusError("", "manifest not found: " + manifest_path.string());
  }
  const auto base_dir = manifest_path.parent_path();
  std::vector<AigiRecord> records;
  try {
    util::read_jsonl(manifest_path, [&](std::size_t, const util::Json& json) {
      records.push_back(record_from_json(json, base_dir));
    });
  } catch (const util::JsonlError& e) {
    throw CorpusError("", e.what());
  }
  return Corpus::build(std::move(records), options);
}

void write_manifest(const fs::path& path, std::span<const AigiRecord> records) {
  std::vector<util::Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(record_to_json(r));
  util::write_jsonl(path, lines);
}

}  // namespace aigiqa::corpus
