#include "aigiqa/rating/service.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "aigiqa/subjective/mos.hpp"
#include "aigiqa/util/rng.hpp"

namespace aigiqa::rating {
namespace fs = std::filesystem;

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnknownEvaluator: return "unknown_evaluator";
    case Errc::StageOutOfRange: return "stage_out_of_range";
    case Errc::UnknownImage: return "unknown_image";
    case Errc::OutOfOrder: return "out_of_order";
    case Errc::OffGrid: return "off_grid";
    case Errc::ScoreOutOfRange: return "score_out_of_range";
    case Errc::Duplicate: return "duplicate";
    case Errc::ConcurrentSubmission: return "concurrent_submission";
    case Errc::StageComplete: return "stage_complete";
  }
  return "error";
}

ServiceConfig ServiceConfig::from_config(const util::KeyValueConfig& config) {
  ServiceConfig out;
  out.stage_count = static_cast<int>(config.get_int("stage_count", out.stage_count));
  out.seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
  out.host = config.get_string("host", out.host);
  out.port = static_cast<int>(config.get_int("port", out.port));
  out.corpus_path = config.get_string("corpus_path", "");
  out.store_path = config.get_string("store_path", out.store_path.string());
  out.ui_dir = config.get_string("ui_dir", "");
  std::stringstream list(config.get_string("evaluators", ""));
  std::string id;
  while (std::getline(list, id, ',')) {
    id.erase(0, id.find_first_not_of(" \t"));
    id.erase(id.find_last_not_of(" \t") + 1);
    if (!id.empty()) out.evaluators.push_back(id);
  }
  return out;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

namespace {

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RatingError(Errc::UnknownImage, "cannot read image file " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string mime_for(const fs::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  return "application/octet-stream";
}

}  // namespace

RatingService::RatingService(corpus::Corpus corpus, int stage_count, std::uint64_t seed,
                             std::vector<std::string> evaluators, const fs::path& store_path)
    : corpus_(std::move(corpus)),
      seed_(seed),
      evaluators_(evaluators.begin(), evaluators.end()),
      store_(store_path) {
  if (stage_count < 1) throw std::invalid_argument("stage_count must be at least 1");
  if (corpus_.size() < static_cast<std::size_t>(stage_count)) {
    throw std::invalid_argument("corpus has fewer images than stages");
  }

  std::vector<std::string> ids;
  ids.reserve(corpus_.size());
  for (const auto& r : corpus_.records()) ids.push_back(r.image_id);
  std::sort(ids.begin(), ids.end());
  util::Rng rng(util::mix_seed(seed_, util::fnv1a64("stages")));
  rng.shuffle(ids);

  const auto n = ids.size();
  const auto k = static_cast<std::size_t>(stage_count);
  stages_.resize(k);
  std::size_t begin = 0;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t size = n / k + (s < n % k ? 1 : 0);
    stages_[s].assign(ids.begin() + static_cast<std::ptrdiff_t>(begin),
                      ids.begin() + static_cast<std::ptrdiff_t>(begin + size));
    for (const auto& id : stages_[s]) stage_of_[id] = static_cast<int>(s + 1);
    begin += size;
  }
}

const std::vector<std::string>& RatingService::stage_images(int stage) const {
  check_stage(stage);
  return stages_[static_cast<std::size_t>(stage - 1)];
}

void RatingService::check_evaluator(const std::string& evaluator_id) const {
  if (!evaluators_.contains(evaluator_id)) {
    throw RatingError(Errc::UnknownEvaluator, "unknown evaluator `" + evaluator_id + "`");
  }
}

void RatingService::check_stage(int stage) const {
  if (stage < 1 || stage > stage_count()) {
    throw RatingError(Errc::StageOutOfRange, "stage " + std::to_string(stage) +
                                                 " outside [1, " + std::to_string(stage_count()) +
                                                 "]");
  }
}

std::vector<std::string> RatingService::session_order(const std::string& evaluator_id,
                                                      int stage) const {
  auto order = stages_[static_cast<std::size_t>(stage - 1)];
  const auto session_seed = util::mix_seed(
      util::mix_seed(seed_, util::fnv1a64(evaluator_id)), static_cast<std::uint64_t>(stage));
  util::Rng rng(session_seed);
  rng.shuffle(order);
  return order;
}

std::size_t RatingService::cursor_of(const std::string& evaluator_id,
                                     const std::vector<std::string>& order) const {
  std::size_t cursor = 0;
  while (cursor < order.size() && store_.contains(evaluator_id, order[cursor])) ++cursor;
  return cursor;
}

Session RatingService::open_session(const std::string& evaluator_id, int stage) const {
  check_evaluator(evaluator_id);
  check_stage(stage);
  Session session{evaluator_id, stage, session_order(evaluator_id, stage), 0};
  session.cursor = cursor_of(evaluator_id, session.order);
  return session;
}

std::variant<Item, StageComplete> RatingService::next_item(Session& session) const {
  check_evaluator(session.evaluator_id);
  check_stage(session.stage);
  session.cursor = cursor_of(session.evaluator_id, session.order);
  if (session.complete()) return StageComplete{session.order.size(), session.order.size()};

  const auto& record = corpus_.at(session.order[session.cursor]);
  Item item;
  item.image_id = record.image_id;
  item.text_prompt = record.text_prompt;
  item.image = read_bytes(record.image_path);
  item.image_mime = mime_for(record.image_path);
  if (record.image_prompt_path) {
    item.reference = read_bytes(*record.image_prompt_path);
    item.reference_mime = mime_for(*record.image_prompt_path);
  }
  item.position = session.cursor;
  item.stage_size = session.order.size();
  return item;
}

Ack RatingService::submit_rating(const std::string& evaluator_id, int stage,
                                 const std::string& image_id, double quality,
                                 double authenticity, double correspondence) {
  check_evaluator(evaluator_id);
  check_stage(stage);
  for (const double score : {quality, authenticity, correspondence}) {
    if (!subjective::is_on_grid(score)) {
      throw RatingError(Errc::OffGrid, "score " + std::to_string(score) +
                                           " is not a multiple of 0.01");
    }
    if (!subjective::in_range(score)) {
      throw RatingError(Errc::ScoreOutOfRange,
                        "score " + std::to_string(score) + " outside [0, 5]");
    }
  }

  const std::pair<std::string, int> key{evaluator_id, stage};
  {
    std::lock_guard lock(in_flight_mutex_);
    if (!in_flight_.insert(key).second) {
      throw RatingError(Errc::ConcurrentSubmission,
                        "another submission for this session is in progress");
    }
  }
  struct Release {
    RatingService* self;
    std::pair<std::string, int> key;
    ~Release() {
      std::lock_guard lock(self->in_flight_mutex_);
      self->in_flight_.erase(key);
    }
  } release{this, key};

  std::lock_guard lock(submit_mutex_);
  if (store_.contains(evaluator_id, image_id)) {
    throw RatingError(Errc::Duplicate, "image `" + image_id + "` already rated by `" +
                                           evaluator_id + "`");
  }
  const auto order = session_order(evaluator_id, stage);
  const auto cursor = cursor_of(evaluator_id, order);
  if (cursor >= order.size()) {
    throw RatingError(Errc::StageComplete, "stage " + std::to_string(stage) + " is complete");
  }
  if (order[cursor] != image_id) {
    if (corpus_.find(image_id) == nullptr) {
      throw RatingError(Errc::UnknownImage, "unknown image `" + image_id + "`");
    }
    throw RatingError(Errc::OutOfOrder, "expected image `" + order[cursor] + "`, got `" +
                                            image_id + "`");
  }

  const auto snap = [](double s) { return std::round(s * 100.0) / 100.0; };
  subjective::RatingEvent event{image_id,     evaluator_id,        stage,
                                snap(quality), snap(authenticity), snap(correspondence),
                                utc_timestamp_now()};
  store_.append(event);
  const auto next = cursor + 1;
  return {next, next == order.size()};
}

std::vector<StageProgress> RatingService::progress(const std::string& evaluator_id) const {
  check_evaluator(evaluator_id);
  std::vector<StageProgress> out;
  out.reserve(stages_.size());
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    StageProgress p{static_cast<int>(s + 1), 0, stages_[s].size()};
    for (const auto& id : stages_[s]) {
      if (store_.contains(evaluator_id, id)) ++p.rated;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace aigiqa::rating
