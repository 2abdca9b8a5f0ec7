#include "aigiqa/harness/predictor.hpp"

#include <set>

#include "aigiqa/harness/dataset.hpp"
#include "aigiqa/harness/train.hpp"

namespace aigiqa::harness {

CheckpointPredictor::CheckpointPredictor(std::span<const std::filesystem::path> checkpoints,
                                         int eval_batch_size)
    : eval_batch_size_(eval_batch_size) {
  if (checkpoints.empty()) throw std::invalid_argument("no checkpoints given");
  if (eval_batch_size < 1) throw std::invalid_argument("eval batch size must be positive");
  for (const auto& path : checkpoints) {
    auto loaded = std::make_shared<assessor::LoadedCheckpoint>(assessor::load_checkpoint(path));
    const auto& meta = loaded->meta;
    if (label_.empty()) {
      label_ = meta.method_label;
      backbone_ = loaded->model.backbone().spec().name;
    } else if (meta.method_label != label_) {
      throw std::invalid_argument("checkpoint " + path.string() + " is " + meta.method_label +
                                  ", expected " + label_);
    }
    if (entries_.count(meta.dimension)) {
      throw std::invalid_argument("two checkpoints for dimension " +
                                  std::string(subjective::to_string(meta.dimension)));
    }
    entries_.emplace(meta.dimension, Entry{path, std::move(loaded)});
  }
}

std::vector<subjective::Dimension> CheckpointPredictor::dimensions() const {
  std::vector<subjective::Dimension> out;
  for (const auto& [d, _] : entries_) out.push_back(d);
  return out;
}

std::string CheckpointPredictor::source(subjective::Dimension dimension) const {
  const auto it = entries_.find(dimension);
  return it == entries_.end() ? std::string{} : it->second.path.string();
}

std::vector<double> CheckpointPredictor::predict(subjective::Dimension dimension,
                                                 const corpus::Corpus& corpus,
                                                 std::span<const std::string> ids) const {
  const auto it = entries_.find(dimension);
  if (it == entries_.end()) {
    throw std::invalid_argument(label_ + " has no checkpoint for dimension " +
                                std::string(subjective::to_string(dimension)));
  }
  const auto& ck = *it->second.checkpoint;
  DatasetOptions options{ck.model.fusion(), ck.meta.policy,
                         ck.model.backbone().spec().normalization, ck.text_encoder.get()};
  const Dataset data(corpus, ids, options);
  const Eigen::VectorXd pred = predict_dataset(ck.model, data, eval_batch_size_);
  return {pred.data(), pred.data() + pred.size()};
}

ScoreTablePredictor::ScoreTablePredictor(std::string method_label, std::string backbone_name,
                                         const std::filesystem::path& path)
    : label_(std::move(method_label)), backbone_(std::move(backbone_name)), path_(path) {
  util::read_jsonl(path, [&](std::size_t line, const util::Json& j) {
    const auto id = j.at("image_id").get<std::string>();
    const auto dim = subjective::parse_dimension(j.at("dimension").get<std::string>());
    const double score = j.contains("score") ? j.at("score").get<double>()
                                             : j.at("mos").get<double>();
    if (!scores_.emplace(std::make_pair(id, dim), score).second) {
      throw util::JsonlError(path.string() + ":" + std::to_string(line) +
                             ": duplicate score for " + id);
    }
  });
}

std::vector<subjective::Dimension> ScoreTablePredictor::dimensions() const {
  std::set<subjective::Dimension> dims;
  for (const auto& [key, _] : scores_) dims.insert(key.second);
  return {dims.begin(), dims.end()};
}

std::vector<double> ScoreTablePredictor::predict(subjective::Dimension dimension,
                                                 const corpus::Corpus&,
                                                 std::span<const std::string> ids) const {
  std::vector<double> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = scores_.find({id, dimension});
    if (it == scores_.end()) {
      throw std::out_of_range(label_ + ": no " + std::string(subjective::to_string(dimension)) +
                              " score for " + id);
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace aigiqa::harness
