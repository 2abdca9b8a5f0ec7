#include "aigiqa/assessor/fusion.hpp"

namespace aigiqa::assessor {

FeatureBundle::FeatureBundle(Eigen::VectorXd generated, Eigen::VectorXd reference,
                             PaddingMask mask)
    : generated_(std::move(generated)), reference_(std::move(reference)), mask_(mask) {
  if (generated_.size() != reference_.size()) {
    throw std::invalid_argument("feature bundle: generated and reference dims differ");
  }
  if (mask_.p0 != 1 || (mask_.p1 != 0 && mask_.p1 != 1)) {
    throw std::invalid_argument("feature bundle: mask must be (1,0) or (1,1)");
  }
  if (mask_.p1 == 0 && !reference_.isZero(0.0)) {
    throw std::invalid_argument("feature bundle: padded reference must be the zero vector");
  }
}

FeatureBundle FeatureBundle::padded(Eigen::VectorXd generated) {
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(generated.size());
  return {std::move(generated), std::move(zeros), PaddingMask::padded()};
}

Eigen::VectorXd masked_mean(const Eigen::VectorXd& generated, const Eigen::VectorXd& reference,
                            PaddingMask mask) {
  return (generated * mask.p0 + reference * mask.p1) / static_cast<double>(mask.p0 + mask.p1);
}

Eigen::VectorXd fuse_pr(const FeatureBundle& bundle) {
  return masked_mean(bundle.generated(), bundle.reference(), bundle.mask());
}

Eigen::MatrixXd fuse_pr(const Eigen::MatrixXd& generated, const Eigen::MatrixXd& reference,
                        std::span<const PaddingMask> masks) {
  if (generated.rows() != reference.rows() || generated.cols() != reference.cols() ||
      static_cast<std::size_t>(generated.rows()) != masks.size()) {
    throw ShapeError("fuse_pr: feature and mask shapes disagree");
  }
  Eigen::MatrixXd out(generated.rows(), generated.cols());
  for (Eigen::Index i = 0; i < generated.rows(); ++i) {
    const auto m = masks[static_cast<std::size_t>(i)];
    out.row(i) = (generated.row(i) * m.p0 + reference.row(i) * m.p1) /
                 static_cast<double>(m.p0 + m.p1);
  }
  return out;
}

Eigen::VectorXd fuse_text(const Eigen::VectorXd& visual, const Eigen::VectorXd& text) {
  Eigen::VectorXd out(visual.size() + text.size());
  out << visual, text;
  return out;
}

Eigen::MatrixXd fuse_text(const Eigen::MatrixXd& visual, const Eigen::MatrixXd& text) {
  if (visual.rows() != text.rows()) {
    throw ShapeError("fuse_text: visual and text batch sizes differ");
  }
  return concat_features(visual, text);
}

Eigen::MatrixXd concat_features(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right) {
  if (left.rows() != right.rows()) throw ShapeError("concat: batch sizes differ");
  Eigen::MatrixXd out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

double mse_loss(std::span<const double> predicted, std::span<const double> labels) {
  if (predicted.empty()) throw std::invalid_argument("mse_loss: empty batch");
  if (predicted.size() != labels.size()) {
    throw std::invalid_argument("mse_loss: predictions and labels differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - labels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predicted.size());
}

Eigen::VectorXd predict_nr(const Backbone& backbone, const RegressionHead& head,
                           std::span<const ImageTensor> generated) {
  return head.forward(backbone.extract(generated));
}

Eigen::VectorXd predict_fr(const Backbone& backbone, const RegressionHead& head,
                           std::span<const ImageTensor> generated,
                           std::span<const ImageTensor> references) {
  if (generated.size() != references.size()) {
    throw ShapeError("predict_fr: " + std::to_string(generated.size()) +
                     " generated images but " + std::to_string(references.size()) +
                     " references");
  }
  return head.forward(concat_features(backbone.extract(generated), backbone.extract(references)));
}

Eigen::VectorXd predict_pr(const Backbone& backbone, const RegressionHead& head,
                           std::span<const PrInput> samples) {
  std::vector<ImageTensor> generated;
  std::vector<ImageTensor> references;
  std::vector<Eigen::Index> reference_rows;
  std::vector<PaddingMask> masks;
  generated.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.generated == nullptr) throw std::invalid_argument("predict_pr: missing generated image");
    if ((s.reference != nullptr) != (s.mask.p1 == 1) || s.mask.p0 != 1) {
      throw std::invalid_argument("predict_pr: sample " + std::to_string(i) +
                                  " mask disagrees with reference presence");
    }
    generated.push_back(*s.generated);
    if (s.reference != nullptr) {
      references.push_back(*s.reference);
      reference_rows.push_back(static_cast<Eigen::Index>(i));
    }
    masks.push_back(s.mask);
  }
  const Eigen::MatrixXd fg = backbone.extract(generated);
  Eigen::MatrixXd fp = Eigen::MatrixXd::Zero(fg.rows(), fg.cols());
  if (!references.empty()) {
    const Eigen::MatrixXd present = backbone.extract(references);
    for (std::size_t k = 0; k < reference_rows.size(); ++k) {
      fp.row(reference_rows[k]) = present.row(static_cast<Eigen::Index>(k));
    }
  }
  return head.forward(fuse_pr(fg, fp, masks));
}

}  // namespace aigiqa::assessor
