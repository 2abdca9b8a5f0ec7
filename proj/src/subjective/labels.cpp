#include "aigiqa/subjective/labels.hpp"

namespace aigiqa::subjective {

util::Json label_to_json(const MosLabel& label) {
  return {{"image_id", label.image_id},
          {"dimension", to_string(label.dimension)},
          {"mean", label.mean},
          {"stddev", label.stddev},
          {"epsilon", label.epsilon},
          {"rating_count", label.rating_count},
          {"kept_count", label.kept_count},
          {"discarded_ids", label.discarded_ids},
          {"mos", label.mos},
          {"rejection_scope", kRejectionScope}};
}

MosLabel label_from_json(const util::Json& json) {
  MosLabel label;
  label.image_id = json.at("image_id").get<std::string>();
  label.dimension = parse_dimension(json.at("dimension").get<std::string>());
  label.mean = json.at("mean").get<double>();
  label.stddev = json.at("stddev").get<double>();
  label.epsilon = json.at("epsilon").get<double>();
  label.rating_count = json.at("rating_count").get<std::size_t>();
  label.kept_count = json.at("kept_count").get<std::size_t>();
  label.discarded_ids = json.at("discarded_ids").get<std::vector<std::string>>();
  label.mos = json.at("mos").get<double>();
  return label;
}

util::Json event_to_json(const RatingEvent& e) {
  return {{"image_id", e.image_id},         {"evaluator_id", e.evaluator_id},
          {"stage", e.stage},               {"quality", e.quality},
          {"authenticity", e.authenticity}, {"correspondence", e.correspondence},
          {"timestamp", e.timestamp}};
}

RatingEvent event_from_json(const util::Json& json) {
  RatingEvent e;
  e.image_id = json.at("image_id").get<std::string>();
  e.evaluator_id = json.at("evaluator_id").get<std::string>();
  e.stage = json.at("stage").get<int>();
  e.quality = json.at("quality").get<double>();
  e.authenticity = json.at("authenticity").get<double>();
  e.correspondence = json.at("correspondence").get<double>();
  e.timestamp = json.value("timestamp", std::string{});
  return e;
}

void write_labels(const std::filesystem::path& path, std::span<const MosLabel> labels) {
  std::vector<util::Json> lines;
  lines.reserve(labels.size());
  for (const auto& l : labels) lines.push_back(label_to_json(l));
  util::write_jsonl(path, lines);
}

std::vector<MosLabel> read_labels(const std::filesystem::path& path) {
  std::vector<MosLabel> labels;
  util::read_jsonl(path, [&](std::size_t line, const util::Json& json) {
    try {
      labels.push_back(label_from_json(json));
    } catch (const std::exception& e) {
      throw util::JsonlError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return labels;
}

std::vector<RatingEvent> read_events(const std::filesystem::path& path) {
  std::vector<RatingEvent> events;
  util::read_jsonl(path, [&](std::size_t line, const util::Json& json) {
    try {
      events.push_back(event_from_json(json));
    } catch (const std::exception& e) {
      throw util::JsonlError(path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return events;
}

LabelTable::LabelTable(std::span<const MosLabel> labels) : labels_(labels.begin(), labels.end()) {
  for (const auto& l : labels_) index_[{l.image_id, l.dimension}] = l.mos;
}

std::optional<double> LabelTable::mos(std::string_view image_id, Dimension dimension) const {
  const auto it = index_.find(std::pair<std::string, Dimension>{std::string(image_id), dimension});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace aigiqa::subjective
