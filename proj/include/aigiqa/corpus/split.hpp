#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aigiqa/corpus/corpus.hpp"

namespace aigiqa::corpus {

enum class Fold { Train, Test };

std::string_view to_string(Fold fold);
Fold parse_fold(std::string_view text);

struct SplitAssignment {
  std::string image_id;
  Fold fold = Fold::Train;

  bool operator==(const SplitAssignment&) const = default;
};

// Train:test ratio, e.g. {3, 1}.
struct SplitRatio {
  int train = 3;
  int test = 1;
};

// Number of test images for a group of `group_size` under `ratio`:
// floor(n * test / (train + test)), remainder to train.
std::size_t test_count(std::size_t group_size, SplitRatio ratio);

/// Splits every (generator, category) group independently. Within a group the
/// members are ordered by image_id, shuffled with a seed derived from
/// (seed, generator, category), and the first test_count() go to the test fold.
/// Output follows corpus order. Throws std::invalid_argument for a
/// non-positive ratio.
std::vector<SplitAssignment> stratified_split(const Corpus& corpus, SplitRatio ratio,
                                              std::uint64_t seed);

/// Lookup view over a split file.
class Split {
 public:
  Split() = default;
  explicit Split(std::vector<SplitAssignment> assignments);

  const std::vector<SplitAssignment>& assignments() const { return assignments_; }
  std::optional<Fold> fold_of(std::string_view image_id) const;

  // Ids of `fold` in assignment order.
  std::vector<std::string> ids(Fold fold) const;

  // Every corpus record is assigned exactly once and nothing else is.
  void check_covers(const Corpus& corpus) const;

 private:
  std::vector<SplitAssignment> assignments_;
  std::unordered_map<std::string, Fold> index_;
};

void write_split(const std::filesystem::path& path, const std::vector<SplitAssignment>& split);
Split read_split(const std::filesystem::path& path);

}  // namespace aigiqa::corpus
