#include "aigiqa/corpus/split.hpp"

#include <algorithm>
#include <map>

#include "aigiqa/util/rng.hpp"

namespace aigiqa::corpus {

std::string_view to_string(Fold fold) { return fold == Fold::Test ? "test" : "train"; }

Fold parse_fold(std::string_view text) {
  if (text == "train") return Fold::Train;
  if (text == "test") return Fold::Test;
  throw std::invalid_argument("unknown fold `" + std::string(text) + "`");
}

std::size_t test_count(std::size_t group_size, SplitRatio ratio) {
  if (ratio.train <= 0 || ratio.test <= 0) {
    throw std::invalid_argument("split ratio must be positive on both sides");
  }
  const auto total = static_cast<std::size_t>(ratio.train + ratio.test);
  return group_size * static_cast<std::size_t>(ratio.test) / total;
}

std::vector<SplitAssignment> stratified_split(const Corpus& corpus, SplitRatio ratio,
                                              std::uint64_t seed) {
  if (ratio.train <= 0 || ratio.test <= 0) {
    throw std::invalid_argument("split ratio must be positive on both sides");
  }

  std::map<std::pair<std::string, std::string>, std::vector<std::string>> groups;
  for (const auto& r : corpus.records()) {
    groups[{r.generator, r.category}].push_back(r.image_id);
  }

  std::unordered_map<std::string, Fold> folds;
  for (auto& [key, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    const auto group_seed = util::mix_seed(
        util::mix_seed(seed, util::fnv1a64(key.first)), util::fnv1a64(key.second));
    util::Rng rng(group_seed);
    rng.shuffle(ids);
    const auto n_test = test_count(ids.size(), ratio);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      folds[ids[i]] = i < n_test ? Fold::Test : Fold::Train;
    }
  }

  std::vector<SplitAssignment> out;
  out.reserve(corpus.size());
  for (const auto& r : corpus.records()) out.push_back({r.image_id, folds.at(r.image_id)});
  return out;
}

Split::Split(std::vector<SplitAssignment> assignments) : assignments_(std::move(assignments)) {
  for (const auto& a : assignments_) {
    if (!index_.emplace(a.image_id, a.fold).second) {
      throw CorpusError(a.image_id, "split assigns `" + a.image_id + "` more than once");
    }
  }
}

std::optional<Fold> Split::fold_of(std::string_view image_id) const {
  const auto it = index_.find(std::string(image_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Split::ids(Fold fold) const {
  std::vector<std::string> out;
  for (const auto& a : assignments_) {
    if (a.fold == fold) out.push_back(a.image_id);
  }
  return out;
}

void Split::check_covers(const Corpus& corpus) const {
  for (const auto& r : corpus.records()) {
    if (!index_.contains(r.image_id)) {
      throw CorpusError(r.image_id, "split does not assign `" + r.image_id + "`");
    }
  }
  for (const auto& a : assignments_) {
    if (corpus.find(a.image_id) == nullptr) {
      throw CorpusError(a.image_id, "split names `" + a.image_id + "` which is not in the corpus");
    }
  }
}

void write_split(const std::filesystem::path& path, const std::vector<SplitAssignment>& split) {
  std::vector<util::Json> lines;
  lines.reserve(split.size());
  for (const auto& a : split) {
    lines.push_back({{"image_id", a.image_id}, {"fold", to_string(a.fold)}});
  }
  util::write_jsonl(path, lines);
}

Split read_split(const std::filesystem::path& path) {
  std::vector<SplitAssignment> out;
  util::read_jsonl(path, [&](std::size_t line, const util::Json& json) {
    try {
      out.push_back({json.at("image_id").get<std::string>(),
                     parse_fold(json.at("fold").get<std::string>())});
    } catch (const std::exception& e) {
      throw CorpusError("", path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  });
  return Split(std::move(out));
}

}  // namespace aigiqa::corpus
