#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/rating/store.hpp"
#include "aigiqa/util/config.hpp"

namespace aigiqa::rating {

enum class Errc {
  UnknownEvaluator,
  StageOutOfRange,
  UnknownImage,
  OutOfOrder,
  OffGrid,
  ScoreOutOfRange,
  Duplicate,
  ConcurrentSubmission,
  StageComplete,
};

std::string_view to_string(Errc code);

class RatingError : public std::runtime_error {
 public:
  RatingError(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// Service configuration. File keys match the member names; environment
/// variables `AIGIQA_<KEY>` override them.
struct ServiceConfig {
  int stage_count = 20;
  std::uint64_t seed = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path corpus_path;
  std::filesystem::path store_path = "ratings.jsonl";
  std::vector<std::string> evaluators;  // comma-separated in the file
  std::filesystem::path ui_dir;         // optional static client

  static ServiceConfig from_config(const util::KeyValueConfig& config);
};

struct Session {
  std::string evaluator_id;
  int stage = 1;
  std::vector<std::string> order;
  std::size_t cursor = 0;

  bool complete() const { return cursor >= order.size(); }
};

struct Item {
  std::string image_id;
  std::string text_prompt;
  std::vector<unsigned char> image;
  std::string image_mime;
  std::optional<std::vector<unsigned char>> reference;
  std::string reference_mime;
  std::size_t position = 0;  // cursor at which the item is served
  std::size_t stage_size = 0;
};

struct StageComplete {
  std::size_t rated = 0;
  std::size_t stage_size = 0;
};

struct Ack {
  std::size_t cursor = 0;
  bool stage_complete = false;
};

struct StageProgress {
  int stage = 1;
  std::size_t rated = 0;
  std::size_t total = 0;
  bool complete() const { return rated == total; }
};

/// Rating sessions over a corpus.
///
/// The corpus is shuffled once with the global seed and cut into
/// `stage_count` contiguous blocks (sizes differ by at most one). Within a
/// stage each evaluator sees the block in an order seeded by
/// (evaluator_id, stage, seed). The cursor is always recomputed from the
/// store, so reconnecting clients resume where the last acknowledged rating
/// left off.
class RatingService {
 public:
  RatingService(corpus::Corpus corpus, int stage_count, std::uint64_t seed,
                std::vector<std::string> evaluators, const std::filesystem::path& store_path);

  int stage_count() const { return static_cast<int>(stages_.size()); }
  const std::vector<std::string>& stage_images(int stage) const;

  Session open_session(const std::string& evaluator_id, int stage) const;

  // Refreshes `session.cursor` from the store, then serves the item there.
  std::variant<Item, StageComplete> next_item(Session& session) const;

  Ack submit_rating(const std::string& evaluator_id, int stage, const std::string& image_id,
                    double quality, double authenticity, double correspondence);

  std::vector<StageProgress> progress(const std::string& evaluator_id) const;

  const RatingStore& store() const { return store_; }
  const corpus::Corpus& corpus() const { return corpus_; }

 private:
  void check_evaluator(const std::string& evaluator_id) const;
  void check_stage(int stage) const;
  std::vector<std::string> session_order(const std::string& evaluator_id, int stage) const;
  std::size_t cursor_of(const std::string& evaluator_id,
                        const std::vector<std::string>& order) const;

  corpus::Corpus corpus_;
  std::uint64_t seed_;
  std::set<std::string> evaluators_;
  std::vector<std::vector<std::string>> stages_;
  std::map<std::string, int> stage_of_;
  RatingStore store_;

  std::mutex submit_mutex_;
  std::mutex in_flight_mutex_;
  std::set<std::pair<std::string, int>> in_flight_;
};

std::string utc_timestamp_now();

}  // namespace aigiqa::rating
