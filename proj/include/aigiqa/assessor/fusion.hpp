#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aigiqa/assessor/backbone.hpp"
#include "aigiqa/assessor/head.hpp"

namespace aigiqa::assessor {

/// Per-sample padding mask (p0, p1). p0 is always 1; p1 is 1 when the sample
/// has a real reference feature and 0 when the reference slot is padding.
struct PaddingMask {
  int p0 = 1;
  int p1 = 0;

  static constexpr PaddingMask with_reference() { return {1, 1}; }
  static constexpr PaddingMask padded() { return {1, 0}; }

  bool operator==(const PaddingMask&) const = default;
};

/// Generated-image feature, reference feature and mask. A padded bundle
/// always carries an all-zero reference of the same dimension.
class FeatureBundle {
 public:
  // Throws std::invalid_argument on a dimension mismatch, a mask outside
  // {(1,0), (1,1)}, or a padded bundle whose reference is not all zero.
  FeatureBundle(Eigen::VectorXd generated, Eigen::VectorXd reference, PaddingMask mask);

  static FeatureBundle padded(Eigen::VectorXd generated);

  const Eigen::VectorXd& generated() const { return generated_; }
  const Eigen::VectorXd& reference() const { return reference_; }
  PaddingMask mask() const { return mask_; }

 private:
  Eigen::VectorXd generated_;
  Eigen::VectorXd reference_;
  PaddingMask mask_;
};

// Mean pooling under the mask: (f_g * p0 + f_p * p1) / (p0 + p1). No
// validation; see FeatureBundle for the checked form.
Eigen::VectorXd masked_mean(const Eigen::VectorXd& generated, const Eigen::VectorXd& reference,
                            PaddingMask mask);

Eigen::VectorXd fuse_pr(const FeatureBundle& bundle);

// Row-wise masked mean over a batch: rows of `generated` and `reference`
// (both (B, D)) pooled with masks[i].
Eigen::MatrixXd fuse_pr(const Eigen::MatrixXd& generated, const Eigen::MatrixXd& reference,
                        std::span<const PaddingMask> masks);

// [visual | text] concatenation, per vector or per row.
Eigen::VectorXd fuse_text(const Eigen::VectorXd& visual, const Eigen::VectorXd& text);
Eigen::MatrixXd fuse_text(const Eigen::MatrixXd& visual, const Eigen::MatrixXd& text);

// [left | right] along features.
Eigen::MatrixXd concat_features(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right);

// Mean of squared differences. Throws on empty input or unequal lengths.
double mse_loss(std::span<const double> predicted, std::span<const double> labels);

/// Sample for the partial-reference predictor. `reference` is null for a
/// text-to-image sample; the mask must agree with its presence.
struct PrInput {
  const ImageTensor* generated = nullptr;
  const ImageTensor* reference = nullptr;
  PaddingMask mask = PaddingMask::padded();
};

// s = R(F(I_g))
Eigen::VectorXd predict_nr(const Backbone& backbone, const RegressionHead& head,
                           std::span<const ImageTensor> generated);

// s = R([F(I_g) | F(I_p)]), one backbone for both paths.
Eigen::VectorXd predict_fr(const Backbone& backbone, const RegressionHead& head,
                           std::span<const ImageTensor> generated,
                           std::span<const ImageTensor> references);

// s = R(masked_mean(F(I_g), F(I_p) or 0, mask)). References are only run
// through the backbone when present; padded slots are zero features.
Eigen::VectorXd predict_pr(const Backbone& backbone, const RegressionHead& head,
                           std::span<const PrInput> samples);

}  // namespace aigiqa::assessor
