#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include <opencv2/core.hpp>

#include "aigiqa/util/rng.hpp"

namespace aigiqa::assessor {

class ImageDecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decodes a PNG/JPEG file into an 8-bit, 3-channel RGB matrix.
cv::Mat load_rgb(const std::filesystem::path& path);

// Decodes an in-memory encoded image into 8-bit RGB.
cv::Mat decode_rgb(const std::vector<unsigned char>& bytes);

// Planar (CHW) floating-point image, the input format of every backbone.
struct ImageTensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  ImageTensor() = default;
  ImageTensor(int c, int h, int w) : channels(c), height(h), width(w),
      data(static_cast<std::size_t>(c) * h * w, 0.0) {}

  double& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  bool operator==(const ImageTensor&) const = default;
};

// Per-channel (RGB) normalization applied after scaling pixels to [0, 1].
struct Normalization {
  std::array<double, 3> mean{0.485, 0.456, 0.406};
  std::array<double, 3> stddev{0.229, 0.224, 0.225};

  static Normalization imagenet() { return {}; }
  static Normalization symmetric() { return {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}; }

  bool operator==(const Normalization&) const = default;
};

struct PreprocessPolicy {
  int resize_to = 256;
  int crop_to = 224;
  bool random_crop = true;
  double hflip_prob = 0.5;

  // 256 -> 224 crop, used by every backbone except InceptionV4.
  static PreprocessPolicy standard() { return {}; }
  // 320 -> 299 crop for InceptionV4.
  static PreprocessPolicy inception() { return {320, 299, true, 0.5}; }

  // Throws std::invalid_argument unless 0 < crop_to <= resize_to and
  // hflip_prob lies in [0, 1].
  void validate() const;

  bool operator==(const PreprocessPolicy&) const = default;
};

enum class Mode { Train, Eval };

// First, deterministic stage of preprocessing: bilinear resize to a square of
// side `policy.resize_to`. Split out so datasets can cache its result.
cv::Mat resize_for(const cv::Mat& rgb, const PreprocessPolicy& policy);

// Second stage: crop (random in Train mode when policy.random_crop, center
// otherwise), horizontal flip with `hflip_prob` in Train mode only, then
// scale to [0,1] and normalize. `resized` must already be resize_to square.
ImageTensor crop_and_normalize(const cv::Mat& resized, const PreprocessPolicy& policy,
                               const Normalization& norm, Mode mode, util::Rng& rng);

ImageTensor preprocess(const cv::Mat& rgb, const PreprocessPolicy& policy,
                       const Normalization& norm, Mode mode, util::Rng& rng);

}  // namespace aigiqa::assessor
