#include "aigiqa/rating/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "aigiqa/subjective/labels.hpp"

namespace aigiqa::rating {
namespace {

struct Replay {
  std::vector<subjective::RatingEvent> events;
  std::size_t valid_bytes = 0;
  bool torn_tail = false;
};

Replay replay(const std::filesystem::path& path) {
  Replay out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    const auto eol = content.find('\n', pos);
    const bool complete = eol != std::string::npos;
    const std::string line = content.substr(pos, complete ? eol - pos : std::string::npos);
    const std::size_t next = complete ? eol + 1 : content.size();

    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      if (complete) out.valid_bytes = next;
      pos = next;
      continue;
    }
    try {
      out.events.push_back(subjective::event_from_json(util::Json::parse(line)));
    } catch (const std::exception& e) {
      if (!complete) {
        out.torn_tail = true;
        break;
      }
      throw StoreError(path.string() + ":" + std::to_string(line_no) +
                       ": corrupt rating record: " + e.what());
    }
    if (!complete) {
      // Parsed, but the newline never made it to disk: not acknowledged.
      out.events.pop_back();
      out.torn_tail = true;
      break;
    }
    out.valid_bytes = next;
    pos = next;
  }
  return out;
}

}  // namespace

RatingStore::RatingStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  auto state = replay(path_);
  for (auto& e : state.events) {
    if (!keys_.emplace(e.evaluator_id, e.image_id).second) {
      throw StoreError(path_.string() + ": duplicate rating for evaluator `" + e.evaluator_id +
                       "` image `" + e.image_id + "`");
    }
  }
  events_ = std::move(state.events);

  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw StoreError("cannot open rating store " + path_.string() + ": " + std::strerror(errno));
  }
  if (state.torn_tail) {
    if (::ftruncate(fd_, static_cast<off_t>(state.valid_bytes)) != 0 || ::fsync(fd_) != 0) {
      throw StoreError("cannot truncate torn tail of " + path_.string());
    }
  }
}

RatingStore::~RatingStore() {
  if (fd_ >= 0) ::close(fd_);
}

void RatingStore::append(const subjective::RatingEvent& event) {
  std::unique_lock lock(mutex_);
  if (keys_.contains({event.evaluator_id, event.image_id})) {
    throw StoreError("duplicate rating for evaluator `" + event.evaluator_id + "` image `" +
                     event.image_id + "`");
  }
  const std::string line = subjective::event_to_json(event).dump() + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StoreError("rating store write failed: " + std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    throw StoreError("rating store fsync failed: " + std::string(std::strerror(errno)));
  }
  keys_.emplace(event.evaluator_id, event.image_id);
  events_.push_back(event);
}

bool RatingStore::contains(const std::string& evaluator_id, const std::string& image_id) const {
  std::shared_lock lock(mutex_);
  return keys_.contains({evaluator_id, image_id});
}

std::size_t RatingStore::size() const {
  std::shared_lock lock(mutex_);
  return events_.size();
}

std::vector<subjective::RatingEvent> RatingStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return events_;
}

std::vector<subjective::RatingEvent> RatingStore::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw StoreError("rating store not found: " + path.string());
  }
  return replay(path).events;
}

}  // namespace aigiqa::rating
