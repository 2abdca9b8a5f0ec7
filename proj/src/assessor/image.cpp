#include "aigiqa/assessor/image.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace aigiqa::assessor {
namespace {

cv::Mat to_rgb8(const cv::Mat& decoded, const std::string& what) {
  if (decoded.empty()) throw ImageDecodeError("cannot decode image: " + what);
  cv::Mat rgb;
  switch (decoded.channels()) {
    case 1: cv::cvtColor(decoded, rgb, cv::COLOR_GRAY2RGB); break;
    case 3: cv::cvtColor(decoded, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(decoded, rgb, cv::COLOR_BGRA2RGB); break;
    default: throw ImageDecodeError("unsupported channel count in " + what);
  }
  if (rgb.depth() != CV_8U) {
    cv::Mat converted;
    rgb.convertTo(converted, CV_8U, rgb.depth() == CV_16U ? 1.0 / 257.0 : 1.0);
    rgb = converted;
  }
  return rgb;
}

}  // namespace

cv::Mat load_rgb(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ImageDecodeError("image file does not exist: " + path.string());
  }
  return to_rgb8(cv::imread(path.string(), cv::IMREAD_UNCHANGED), path.string());
}

cv::Mat decode_rgb(const std::vector<unsigned char>& bytes) {
  if (bytes.empty()) throw ImageDecodeError("cannot decode image: empty buffer");
  return to_rgb8(cv::imdecode(bytes, cv::IMREAD_UNCHANGED), "<memory>");
}

void PreprocessPolicy::validate() const {
  if (crop_to <= 0 || resize_to <= 0) {
    throw std::invalid_argument("preprocess policy: sizes must be positive");
  }
  if (crop_to > resize_to) {
    throw std::invalid_argument("preprocess policy: crop_to exceeds resize_to");
  }
  if (!(hflip_prob >= 0.0 && hflip_prob <= 1.0)) {
    throw std::invalid_argument("preprocess policy: hflip_prob outside [0, 1]");
  }
}

cv::Mat resize_for(const cv::Mat& rgb, const PreprocessPolicy& policy) {
  policy.validate();
  if (rgb.empty() || rgb.type() != CV_8UC3) {
    throw ImageDecodeError("preprocess expects a decoded 8-bit RGB image");
  }
  if (rgb.rows == policy.resize_to && rgb.cols == policy.resize_to) return rgb;
  cv::Mat resized;
  cv::resize(rgb, resized, cv::Size(policy.resize_to, policy.resize_to), 0, 0,
             cv::INTER_LINEAR);
  return resized;
}

ImageTensor crop_and_normalize(const cv::Mat& resized, const PreprocessPolicy& policy,
                               const Normalization& norm, Mode mode, util::Rng& rng) {
  policy.validate();
  if (resized.rows != policy.resize_to || resized.cols != policy.resize_to ||
      resized.type() != CV_8UC3) {
    throw std::invalid_argument("crop_and_normalize: input is not resize_to square RGB");
  }
  const int span = policy.resize_to - policy.crop_to;
  int top = span / 2;
  int left = span / 2;
  bool flip = false;
  if (mode == Mode::Train) {
    if (policy.random_crop) {
      top = static_cast<int>(rng.below(static_cast<std::uint64_t>(span) + 1));
      left = static_cast<int>(rng.below(static_cast<std::uint64_t>(span) + 1));
    }
    flip = rng.uniform() < policy.hflip_prob;
  }

  const int side = policy.crop_to;
  ImageTensor out(3, side, side);
  for (int y = 0; y < side; ++y) {
    const auto* row = resized.ptr<cv::Vec3b>(top + y);
    for (int x = 0; x < side; ++x) {
      const int src_x = left + (flip ? side - 1 - x : x);
      const cv::Vec3b px = row[src_x];
      for (int c = 0; c < 3; ++c) {
        out.at(c, y, x) = (px[c] / 255.0 - norm.mean[c]) / norm.stddev[c];
      }
    }
  }
  return out;
}

ImageTensor preprocess(const cv::Mat& rgb, const PreprocessPolicy& policy,
                       const Normalization& norm, Mode mode, util::Rng& rng) {
  return crop_and_normalize(resize_for(rgb, policy), policy, norm, mode, rng);
}

}  // namespace aigiqa::assessor
