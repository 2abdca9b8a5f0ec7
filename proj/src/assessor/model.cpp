#include "aigiqa/assessor/model.hpp"

namespace aigiqa::assessor {

std::string_view to_string(Fusion fusion) {
  switch (fusion) {
    case Fusion::NR: return "nr";
    case Fusion::FR: return "fr";
    case Fusion::PR: return "pr";
  }
  return "nr";
}

Fusion parse_fusion(std::string_view text) {
  if (text == "nr" || text == "NR") return Fusion::NR;
  if (text == "fr" || text == "FR") return Fusion::FR;
  if (text == "pr" || text == "PR") return Fusion::PR;
  throw std::invalid_argument("unknown fusion mode `" + std::string(text) +
                              "` (expected nr, fr or pr)");
}

int Assessor::fused_dim(int feature_dim, Fusion fusion, int text_dim) {
  return (fusion == Fusion::FR ? 2 * feature_dim : feature_dim) + text_dim;
}

Assessor::Assessor(std::unique_ptr<Backbone> backbone, Fusion fusion, int text_dim,
                   RegressionHead head)
    : backbone_(std::move(backbone)), fusion_(fusion), text_dim_(text_dim), head_(std::move(head)) {
  if (!backbone_) throw std::invalid_argument("assessor: null backbone");
  if (text_dim_ < 0) throw std::invalid_argument("assessor: negative text dimension");
  const int expected = fused_dim(backbone_->spec().feature_dim, fusion_, text_dim_);
  if (head_.input_dim() != expected) {
    throw ShapeError("assessor: head expects " + std::to_string(head_.input_dim()) +
                     " inputs but fusion produces " + std::to_string(expected));
  }
}

Assessor Assessor::create(std::unique_ptr<Backbone> backbone, Fusion fusion, int text_dim,
                          util::Rng& rng) {
  if (!backbone) throw std::invalid_argument("assessor: null backbone");
  const int dim = fused_dim(backbone->spec().feature_dim, fusion, text_dim);
  RegressionHead head(dim, rng);
  return Assessor(std::move(backbone), fusion, text_dim, std::move(head));
}

Assessor::Features Assessor::compute(const Batch& batch) const {
  const auto n = batch.size();
  if (fusion_ != Fusion::NR && batch.references.size() != n) {
    throw ShapeError("assessor: reference slots (" + std::to_string(batch.references.size()) +
                     ") do not match batch size (" + std::to_string(n) + ")");
  }
  if (text_dim_ > 0 && (batch.text.rows() != static_cast<Eigen::Index>(n) ||
                        batch.text.cols() != text_dim_)) {
    throw ShapeError("assessor: text features must be (B, " + std::to_string(text_dim_) + ")");
  }

  Features f;
  f.generated = backbone_->extract(batch.generated);
  const auto d = f.generated.cols();
  Eigen::MatrixXd visual;

  if (fusion_ == Fusion::NR) {
    visual = f.generated;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ref = batch.references[i];
      if (ref) {
        f.present_references.push_back(*ref);
        f.present_rows.push_back(static_cast<Eigen::Index>(i));
        f.masks.push_back(PaddingMask::with_reference());
      } else {
        if (fusion_ == Fusion::FR) {
          throw std::invalid_argument("full-reference assessor: sample " + std::to_string(i) +
                                      " has no reference image");
        }
        f.masks.push_back(PaddingMask::padded());
      }
    }
    f.reference = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), d);
    if (!f.present_references.empty()) {
      const Eigen::MatrixXd present = backbone_->extract(f.present_references);
      for (std::size_t k = 0; k < f.present_rows.size(); ++k) {
        f.reference.row(f.present_rows[k]) = present.row(static_cast<Eigen::Index>(k));
      }
    }
    visual = fusion_ == Fusion::FR ? concat_features(f.generated, f.reference)
                                   : fuse_pr(f.generated, f.reference, f.masks);
  }

  f.fused = text_dim_ > 0 ? fuse_text(visual, batch.text) : std::move(visual);
  return f;
}

Eigen::MatrixXd Assessor::fused_features(const Batch& batch) const {
  return compute(batch).fused;
}

Eigen::VectorXd Assessor::predict(const Batch& batch) const {
  return head_.forward(fused_features(batch));
}

Assessor::LossAndGradient Assessor::loss_and_gradient(const Batch& batch,
                                                      const Eigen::VectorXd& labels,
                                                      bool include_backbone) const {
  if (labels.size() != static_cast<Eigen::Index>(batch.size())) {
    throw ShapeError("assessor: label count does not match batch size");
  }
  const auto f = compute(batch);
  RegressionHead::Cache cache;
  const Eigen::VectorXd scores = head_.forward(f.fused, cache);

  LossAndGradient out;
  out.loss = mse_loss(std::span<const double>(scores.data(), scores.size()),
                      std::span<const double>(labels.data(), labels.size()));
  const Eigen::VectorXd grad_scores = 2.0 * (scores - labels) / static_cast<double>(scores.size());
  const auto head_grad = head_.backward(cache, grad_scores);
  out.gradients = RegressionHead::flatten(head_grad);

  if (!include_backbone || !backbone_->trainable()) return out;

  const auto d = f.generated.cols();
  const Eigen::MatrixXd grad_visual = head_grad.input.leftCols(head_grad.input.cols() - text_dim_);
  Eigen::MatrixXd grad_generated;
  Eigen::MatrixXd grad_reference;
  switch (fusion_) {
    case Fusion::NR:
      grad_generated = grad_visual;
      break;
    case Fusion::FR:
      grad_generated = grad_visual.leftCols(d);
      grad_reference = grad_visual.rightCols(d);
      break;
    case Fusion::PR:
      grad_generated = grad_visual;
      grad_reference = grad_visual;
      for (std::size_t i = 0; i < f.masks.size(); ++i) {
        const auto m = f.masks[i];
        const double denom = m.p0 + m.p1;
        grad_generated.row(static_cast<Eigen::Index>(i)) *= m.p0 / denom;
        grad_reference.row(static_cast<Eigen::Index>(i)) *= m.p1 / denom;
      }
      break;
  }

  std::vector<std::vector<double>> backbone_grads;
  for (const auto size : backbone_->parameter_sizes()) backbone_grads.emplace_back(size, 0.0);
  backbone_->accumulate_gradient(batch.generated, grad_generated, backbone_grads);
  if (!f.present_references.empty()) {
    Eigen::MatrixXd grad_present(static_cast<Eigen::Index>(f.present_rows.size()), d);
    for (std::size_t k = 0; k < f.present_rows.size(); ++k) {
      grad_present.row(static_cast<Eigen::Index>(k)) = grad_reference.row(f.present_rows[k]);
    }
    backbone_->accumulate_gradient(f.present_references, grad_present, backbone_grads);
  }
  for (auto& g : backbone_grads) out.gradients.push_back(std::move(g));
  return out;
}

std::vector<std::span<double>> Assessor::parameter_blocks(bool include_backbone) {
  auto blocks = head_.parameter_blocks();
  if (include_backbone && backbone_->trainable()) {
    for (auto block : backbone_->parameter_blocks()) blocks.push_back(block);
  }
  return blocks;
}

}  // namespace aigiqa::assessor
