#include "aigiqa/assessor/backbone.hpp"

#include <mutex>

#include <opencv2/dnn.hpp>

#include "aigiqa/util/rng.hpp"

namespace aigiqa::assessor {

PreprocessPolicy BackboneSpec::policy() const {
  if (input_size == 299) return PreprocessPolicy::inception();
  PreprocessPolicy p = PreprocessPolicy::standard();
  if (input_size != p.crop_to) {
    // Keep the 256/224 ratio for other input sizes.
    p.crop_to = input_size;
    p.resize_to = (input_size * 256 + 223) / 224;
  }
  return p;
}

std::optional<BackboneSpec> known_backbone(std::string_view name) {
  // VGG features are the globally average-pooled last conv block.
  static const std::vector<BackboneSpec> registry{
      {"vgg16", 512, 224, true, Normalization::imagenet()},
      {"vgg19", 512, 224, true, Normalization::imagenet()},
      {"resnet18", 512, 224, true, Normalization::imagenet()},
      {"resnet50", 2048, 224, true, Normalization::imagenet()},
      {"inception_v4", 1536, 299, true, Normalization::symmetric()},
      {"vit_large_patch16_224", 1024, 224, true, Normalization::symmetric()},
  };
  for (const auto& spec : registry) {
    if (spec.name == name) return spec;
  }
  return std::nullopt;
}

std::vector<std::string> known_backbone_names() {
  return {"stub", "vgg16", "vgg19", "resnet18", "resnet50", "inception_v4",
          "vit_large_patch16_224"};
}

void Backbone::accumulate_gradient(std::span<const ImageTensor>, const Eigen::MatrixXd&,
                                   std::vector<std::vector<double>>&) const {}

void Backbone::check_inputs(std::span<const ImageTensor> images) const {
  const int s = spec().input_size;
  for (const auto& image : images) {
    if (image.channels != 3 || image.height != s || image.width != s) {
      throw ShapeError("backbone `" + spec().name + "` expects 3x" + std::to_string(s) + "x" +
                       std::to_string(s) + " input, got " + std::to_string(image.channels) +
                       "x" + std::to_string(image.height) + "x" + std::to_string(image.width));
    }
  }
}

// --- stub -------------------------------------------------------------------

StubBackbone::StubBackbone(int feature_dim, int input_size, int grid, std::uint64_t seed)
    : grid_(grid) {
  if (feature_dim < 1 || grid < 1 || input_size < grid) {
    throw std::invalid_argument("stub backbone: need feature_dim >= 1 and 1 <= grid <= input");
  }
  spec_ = {"stub", feature_dim, input_size, false, Normalization::imagenet()};
  const int inputs = 3 * grid * grid;
  const double bound = 1.0 / std::sqrt(static_cast<double>(inputs));
  util::Rng rng(util::mix_seed(seed, util::fnv1a64("stub-backbone")));
  weights_.resize(feature_dim, inputs);
  for (int j = 0; j < inputs; ++j) {
    for (int i = 0; i < feature_dim; ++i) weights_(i, j) = rng.uniform(-bound, bound);
  }
}

StubBackbone::StubBackbone(Eigen::MatrixXd weights, int input_size, int grid)
    : grid_(grid), weights_(std::move(weights)) {
  if (weights_.cols() != 3 * grid * grid || weights_.rows() < 1 || input_size < grid) {
    throw std::invalid_argument("stub backbone: weights must be D x (3 * grid^2)");
  }
  spec_ = {"stub", static_cast<int>(weights_.rows()), input_size, false,
           Normalization::imagenet()};
}

Eigen::MatrixXd StubBackbone::pooled(std::span<const ImageTensor> images) const {
  check_inputs(images);
  const int s = spec_.input_size;
  const int cells = grid_ * grid_;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(images.size()), 3 * cells);
  for (std::size_t b = 0; b < images.size(); ++b) {
    const auto& image = images[b];
    for (int c = 0; c < 3; ++c) {
      for (int gy = 0; gy < grid_; ++gy) {
        const int y0 = gy * s / grid_;
        const int y1 = (gy + 1) * s / grid_;
        for (int gx = 0; gx < grid_; ++gx) {
          const int x0 = gx * s / grid_;
          const int x1 = (gx + 1) * s / grid_;
          double sum = 0.0;
          for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) sum += image.at(c, y, x);
          }
          out(static_cast<Eigen::Index>(b), c * cells + gy * grid_ + gx) =
              sum / static_cast<double>((y1 - y0) * (x1 - x0));
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXd StubBackbone::extract(std::span<const ImageTensor> images) const {
  if (images.empty()) return Eigen::MatrixXd(0, spec_.feature_dim);
  return pooled(images) * weights_.transpose();
}

std::vector<std::span<double>> StubBackbone::parameter_blocks() {
  return {std::span<double>(weights_.data(), static_cast<std::size_t>(weights_.size()))};
}

void StubBackbone::accumulate_gradient(std::span<const ImageTensor> images,
                                       const Eigen::MatrixXd& grad_features,
                                       std::vector<std::vector<double>>& grads) const {
  if (images.empty()) return;
  if (grad_features.rows() != static_cast<Eigen::Index>(images.size()) ||
      grad_features.cols() != weights_.rows()) {
    throw ShapeError("stub backbone: gradient shape mismatch");
  }
  if (grads.size() != 1) grads.assign(1, std::vector<double>(weights_.size(), 0.0));
  const Eigen::MatrixXd dw = grad_features.transpose() * pooled(images);  // D x P
  Eigen::Map<Eigen::MatrixXd> acc(grads[0].data(), weights_.rows(), weights_.cols());
  acc += dw;
}

// --- onnx -------------------------------------------------------------------

struct OnnxBackbone::Impl {
  cv::dnn::Net net;
  std::mutex mutex;  // cv::dnn::Net::forward mutates internal state
};

OnnxBackbone::OnnxBackbone(BackboneSpec spec, const std::filesystem::path& model_path)
    : spec_(std::move(spec)), model_path_(model_path), impl_(std::make_unique<Impl>()) {
  if (!std::filesystem::exists(model_path_)) {
    throw std::invalid_argument("ONNX model not found: " + model_path_.string());
  }
  try {
    impl_->net = cv::dnn::readNetFromONNX(model_path_.string());
  } catch (const cv::Exception& e) {
    throw std::invalid_argument("cannot load ONNX model " + model_path_.string() + ": " +
                                e.what());
  }
  impl_->net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
  impl_->net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
}

OnnxBackbone::~OnnxBackbone() = default;

Eigen::MatrixXd OnnxBackbone::extract(std::span<const ImageTensor> images) const {
  check_inputs(images);
  const auto batch = static_cast<int>(images.size());
  if (batch == 0) return Eigen::MatrixXd(0, spec_.feature_dim);
  const int s = spec_.input_size;
  const int dims[] = {batch, 3, s, s};
  cv::Mat blob(4, dims, CV_32F);
  auto* dst = blob.ptr<float>();
  for (const auto& image : images) {
    for (const double v : image.data) *dst++ = static_cast<float>(v);
  }

  cv::Mat out;
  {
    std::lock_guard lock(impl_->mutex);
    impl_->net.setInput(blob);
    out = impl_->net.forward().clone();
  }
  const auto total = static_cast<long>(out.total());
  if (total != static_cast<long>(batch) * spec_.feature_dim) {
    throw ShapeError("ONNX backbone `" + spec_.name + "` produced " + std::to_string(total) +
                     " values for batch " + std::to_string(batch) + ", expected D = " +
                     std::to_string(spec_.feature_dim) + " per image");
  }
  const auto* src = out.ptr<float>();
  Eigen::MatrixXd features(batch, spec_.feature_dim);
  for (int b = 0; b < batch; ++b) {
    for (int d = 0; d < spec_.feature_dim; ++d) {
      features(b, d) = src[static_cast<std::size_t>(b) * spec_.feature_dim + d];
    }
  }
  return features;
}

std::unique_ptr<Backbone> make_backbone(const BackboneOptions& options) {
  if (options.name == "stub") {
    return std::make_unique<StubBackbone>(options.feature_dim, options.input_size, options.grid,
                                          options.seed);
  }
  auto spec = known_backbone(options.name);
  if (!spec) {
    if (!options.onnx_feature_dim) {
      throw std::invalid_argument("unknown backbone `" + options.name +
                                  "` (give a feature dimension for custom ONNX models)");
    }
    spec = BackboneSpec{options.name, *options.onnx_feature_dim, options.input_size, true,
                        Normalization::imagenet()};
  } else if (options.onnx_feature_dim) {
    spec->feature_dim = *options.onnx_feature_dim;
  }
  if (options.model_path.empty()) {
    throw std::invalid_argument("backbone `" + options.name +
                                "` needs an ONNX export of its pretrained weights");
  }
  return std::make_unique<OnnxBackbone>(*spec, options.model_path);
}

}  // namespace aigiqa::assessor
