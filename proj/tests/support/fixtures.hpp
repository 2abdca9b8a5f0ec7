#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "aigiqa/corpus/corpus.hpp"
#include "aigiqa/subjective/mos.hpp"

namespace aigiqa::support {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// Writes a w x h PNG filled with `rgb` (0..1) plus uniform noise of +-noise.
void write_png(const fs::path& path, int width, int height, const double rgb[3], double noise,
               std::uint64_t seed);

struct SyntheticSpec {
  std::vector<std::string> generators{"gen_a"};
  std::vector<std::string> categories{"cat_a"};
  int per_group = 4;
  // Every `i2i_every`-th record (1-based) is image-to-image; 0 means none.
  int i2i_every = 0;
  int image_size = 48;
  // Channels are independent in [0.1, 0.9]; with green_only, red and blue
  // stay at 0.5 and only the green level (the quality driver) varies.
  bool green_only = false;
  std::uint64_t seed = 1;
};

struct SyntheticImage {
  std::string image_id;
  double rgb[3];
};

struct SyntheticCorpus {
  std::vector<corpus::AigiRecord> records;
  std::vector<SyntheticImage> images;  // same order as records
  fs::path manifest;
};

// Records are named img_<generator>_<category>_<k>.
SyntheticCorpus make_synthetic_corpus(const fs::path& dir, const SyntheticSpec& spec);

// Labels in [0.5, 4.5] driven by one colour channel each: quality by green,
// authenticity by inverted blue, correspondence by red.
std::vector<subjective::MosLabel> synthetic_labels(const SyntheticCorpus& corpus);

subjective::MosLabel label(const std::string& image_id, subjective::Dimension dimension,
                           double mos);

}  // namespace aigiqa::support
