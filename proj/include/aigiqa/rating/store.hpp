#pragma once

#include <filesystem>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aigiqa/subjective/mos.hpp"

namespace aigiqa::rating {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Append-only, line-delimited RatingEvent log with an in-memory index.
///
/// `append` returns only after the line has been written and fsync'ed, so an
/// acknowledged event survives a crash. On open the log is replayed; an
/// incomplete final line (a write cut short before acknowledgment) is dropped
/// and truncated away. Any other malformed line is an error.
class RatingStore {
 public:
  explicit RatingStore(std::filesystem::path path);
  ~RatingStore();

  RatingStore(const RatingStore&) = delete;
  RatingStore& operator=(const RatingStore&) = delete;

  // Throws StoreError if (evaluator_id, image_id) is already present.
  void append(const subjective::RatingEvent& event);

  bool contains(const std::string& evaluator_id, const std::string& image_id) const;
  std::size_t size() const;
  std::vector<subjective::RatingEvent> snapshot() const;

  const std::filesystem::path& path() const { return path_; }

  // Read-only replay with the same torn-tail tolerance; does not modify the file.
  static std::vector<subjective::RatingEvent> load(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::shared_mutex mutex_;
  std::vector<subjective::RatingEvent> events_;
  std::set<std::pair<std::string, std::string>> keys_;
};

}  // namespace aigiqa::rating
