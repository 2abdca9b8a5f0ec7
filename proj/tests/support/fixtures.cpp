#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>

#include <opencv2/imgcodecs.hpp>

#include "aigiqa/util/rng.hpp"

namespace aigiqa::support {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("aigiqa-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_png(const fs::path& path, int width, int height, const double rgb[3], double noise,
               std::uint64_t seed) {
  util::Rng rng(seed);
  cv::Mat bgr(height, width, CV_8UC3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      auto& px = bgr.at<cv::Vec3b>(y, x);
      for (int c = 0; c < 3; ++c) {
        const double v = rgb[c] + noise * (2.0 * rng.uniform() - 1.0);
        px[2 - c] = cv::saturate_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
      }
    }
  }
  if (!cv::imwrite(path.string(), bgr)) throw std::runtime_error("cannot write " + path.string());
}

SyntheticCorpus make_synthetic_corpus(const fs::path& dir, const SyntheticSpec& spec) {
  fs::create_directories(dir / "images");
  util::Rng rng(spec.seed);
  SyntheticCorpus out;
  int counter = 0;
  for (const auto& generator : spec.generators) {
    for (const auto& category : spec.categories) {
      for (int k = 0; k < spec.per_group; ++k) {
        ++counter;
        SyntheticImage image;
        image.image_id = "img_" + generator + "_" + category + "_" + std::to_string(k);
        for (double& c : image.rgb) c = rng.uniform(0.1, 0.9);
        if (spec.green_only) image.rgb[0] = image.rgb[2] = 0.5;
        const auto path = dir / "images" / (image.image_id + ".png");
        write_png(path, spec.image_size, spec.image_size, image.rgb, 0.03, rng.next());

        corpus::AigiRecord record;
        record.image_id = image.image_id;
        record.image_path = path;
        record.generator = generator;
        record.category = category;
        record.text_prompt = "a " + category + " picture number " + std::to_string(k) +
                             " by " + generator;
        record.subset = corpus::Subset::T2I;
        if (spec.i2i_every > 0 && counter % spec.i2i_every == 0) {
          const double ref[3] = {rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9),
                                 rng.uniform(0.1, 0.9)};
          const auto ref_path = dir / "images" / (image.image_id + "_prompt.png");
          write_png(ref_path, spec.image_size, spec.image_size, ref, 0.03, rng.next());
          record.image_prompt_path = ref_path;
          record.subset = corpus::Subset::I2I;
        }
        out.records.push_back(record);
        out.images.push_back(image);
      }
    }
  }
  out.manifest = dir / "manifest.jsonl";
  corpus::write_manifest(out.manifest, out.records);
  return out;
}

subjective::MosLabel label(const std::string& image_id, subjective::Dimension dimension,
                           double mos) {
  subjective::MosLabel l;
  l.image_id = image_id;
  l.dimension = dimension;
  l.mean = mos;
  l.rating_count = 2;
  l.kept_count = 2;
  l.mos = mos;
  return l;
}

std::vector<subjective::MosLabel> synthetic_labels(const SyntheticCorpus& corpus) {
  std::vector<subjective::MosLabel> out;
  for (const auto& image : corpus.images) {
    const double mos[3] = {0.5 + 4.0 * (image.rgb[1] - 0.1) / 0.8,
                           0.5 + 4.0 * (0.9 - image.rgb[2]) / 0.8,
                           0.5 + 4.0 * (image.rgb[0] - 0.1) / 0.8};
    for (std::size_t d = 0; d < 3; ++d) {
      out.push_back(label(image.image_id, subjective::kDimensions[d], mos[d]));
    }
  }
  return out;
}

}  // namespace aigiqa::support
