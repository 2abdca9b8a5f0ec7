#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aigiqa/assessor/backbone.hpp"
#include "aigiqa/assessor/fusion.hpp"
#include "aigiqa/assessor/head.hpp"

namespace aigiqa::assessor {

enum class Fusion { NR, FR, PR };

std::string_view to_string(Fusion fusion);
Fusion parse_fusion(std::string_view text);

/// A batch of preprocessed samples. `references` is empty for NR, otherwise
/// one slot per sample (nullopt = no reference). `text` holds one text
/// feature row per sample when text fusion is enabled, else has 0 columns.
struct Batch {
  std::vector<ImageTensor> generated;
  std::vector<std::optional<ImageTensor>> references;
  Eigen::MatrixXd text;

  std::size_t size() const { return generated.size(); }
};

/// Backbone + fusion + regression head: the NR, FR and PR assessors, each
/// optionally with a text feature concatenated before the head.
///
/// Head input dimension: D (NR, PR) or 2D (FR), plus the text dimension.
class Assessor {
 public:
  struct LossAndGradient {
    double loss = 0.0;
    // Head blocks (w1, b1, w2, b2) followed by the backbone blocks when the
    // backbone is included.
    std::vector<std::vector<double>> gradients;
  };

  Assessor(std::unique_ptr<Backbone> backbone, Fusion fusion, int text_dim,
           RegressionHead head);

  static Assessor create(std::unique_ptr<Backbone> backbone, Fusion fusion, int text_dim,
                         util::Rng& rng);

  static int fused_dim(int feature_dim, Fusion fusion, int text_dim);

  Fusion fusion() const { return fusion_; }
  int text_dim() const { return text_dim_; }
  const Backbone& backbone() const { return *backbone_; }
  Backbone& backbone() { return *backbone_; }
  const RegressionHead& head() const { return head_; }
  RegressionHead& head() { return head_; }

  // Features fed to the head, (B, fused_dim).
  Eigen::MatrixXd fused_features(const Batch& batch) const;

  Eigen::VectorXd predict(const Batch& batch) const;

  // MSE over the batch and its gradient w.r.t. every parameter.
  LossAndGradient loss_and_gradient(const Batch& batch, const Eigen::VectorXd& labels,
                                    bool include_backbone) const;

  std::vector<std::span<double>> parameter_blocks(bool include_backbone);

 private:
  struct Features {
    Eigen::MatrixXd generated;   // (B, D)
    Eigen::MatrixXd reference;   // (B, D) or empty for NR
    std::vector<PaddingMask> masks;
    std::vector<ImageTensor> present_references;  // PR/FR: images with a reference
    std::vector<Eigen::Index> present_rows;
    Eigen::MatrixXd fused;
  };

  Features compute(const Batch& batch) const;

  std::unique_ptr<Backbone> backbone_;
  Fusion fusion_;
  int text_dim_;
  RegressionHead head_;
};

}  // namespace aigiqa::assessor
