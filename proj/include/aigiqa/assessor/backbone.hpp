#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aigiqa/assessor/image.hpp"

namespace aigiqa::assessor {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BackboneSpec {
  std::string name;
  int feature_dim = 0;
  int input_size = 224;
  bool pretrained = false;
  Normalization normalization;

  // Preprocessing matching the backbone's input size.
  PreprocessPolicy policy() const;

  bool operator==(const BackboneSpec&) const = default;
};

// Registry of the supported pretrained networks (vgg16, vgg19, resnet18,
// resnet50, inception_v4, vit_large_patch16_224). Feature dims are those of
// the penultimate (pooled) layer.
std::optional<BackboneSpec> known_backbone(std::string_view name);
std::vector<std::string> known_backbone_names();

/// Visual feature extractor F_w: a batch of B preprocessed images -> (B, D).
///
/// Trainable backbones expose their parameters as flat blocks and a
/// vector-Jacobian product so they can be fine-tuned jointly with the head.
class Backbone {
 public:
  virtual ~Backbone() = default;

  virtual const BackboneSpec& spec() const = 0;

  // Throws ShapeError when an image is not input_size x input_size x 3.
  virtual Eigen::MatrixXd extract(std::span<const ImageTensor> images) const = 0;

  virtual bool trainable() const { return false; }
  virtual std::vector<std::span<double>> parameter_blocks() { return {}; }
  virtual std::vector<std::size_t> parameter_sizes() const { return {}; }

  // Adds d(sum_ij grad_features(i,j) * F(i,j)) / d(params) into `grads`,
  // laid out like parameter_blocks().
  virtual void accumulate_gradient(std::span<const ImageTensor> images,
                                   const Eigen::MatrixXd& grad_features,
                                   std::vector<std::vector<double>>& grads) const;

 protected:
  void check_inputs(std::span<const ImageTensor> images) const;
};

/// Deterministic linear backbone over average-pooled pixels.
///
/// Each image is average-pooled onto a `grid x grid` raster per channel,
/// giving P = 3 * grid^2 values (channel-major, then row, then column), and
/// mapped through a seeded D x P matrix. It stands in for pretrained
/// networks in tests and CPU-only runs and is fully trainable.
class StubBackbone final : public Backbone {
 public:
  StubBackbone(int feature_dim, int input_size, int grid, std::uint64_t seed);
  StubBackbone(Eigen::MatrixXd weights, int input_size, int grid);

  const BackboneSpec& spec() const override { return spec_; }
  Eigen::MatrixXd extract(std::span<const ImageTensor> images) const override;

  bool trainable() const override { return true; }
  std::vector<std::span<double>> parameter_blocks() override;
  std::vector<std::size_t> parameter_sizes() const override {
    return {static_cast<std::size_t>(weights_.size())};
  }
  void accumulate_gradient(std::span<const ImageTensor> images,
                           const Eigen::MatrixXd& grad_features,
                           std::vector<std::vector<double>>& grads) const override;

  int grid() const { return grid_; }
  const Eigen::MatrixXd& weights() const { return weights_; }

  // (B, P) pooled inputs.
  Eigen::MatrixXd pooled(std::span<const ImageTensor> images) const;

 private:
  BackboneSpec spec_;
  int grid_;
  Eigen::MatrixXd weights_;  // D x P
};

/// Pretrained network exported to ONNX, evaluated through OpenCV DNN.
/// Frozen: features only. The graph must map (B, 3, S, S) to (B, D) (or to
/// (B, D, 1, 1), which is flattened).
class OnnxBackbone final : public Backbone {
 public:
  OnnxBackbone(BackboneSpec spec, const std::filesystem::path& model_path);
  ~OnnxBackbone() override;

  const BackboneSpec& spec() const override { return spec_; }
  Eigen::MatrixXd extract(std::span<const ImageTensor> images) const override;

  const std::filesystem::path& model_path() const { return model_path_; }

 private:
  struct Impl;
  BackboneSpec spec_;
  std::filesystem::path model_path_;
  std::unique_ptr<Impl> impl_;
};

struct BackboneOptions {
  std::string name = "stub";
  // stub only
  int feature_dim = 512;
  int input_size = 224;
  int grid = 8;
  std::uint64_t seed = 0;
  // pretrained networks
  std::filesystem::path model_path;
  // overrides for ONNX models not in the registry
  std::optional<int> onnx_feature_dim;
};

std::unique_ptr<Backbone> make_backbone(const BackboneOptions& options);

}  // namespace aigiqa::assessor
