#include "aigiqa/harness/dataset.hpp"

#include <numeric>

namespace aigiqa::harness {
namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

}  // namespace

MissingLabelsError::MissingLabelsError(subjective::Dimension dimension,
                                       std::vector<std::string> image_ids)
    : std::runtime_error("missing " + std::string(subjective::to_string(dimension)) +
                         " labels for: " + join_ids(image_ids)),
      image_ids_(std::move(image_ids)) {}

std::vector<std::string> without_reference(const corpus::Corpus& corpus,
                                           std::span<const std::string> ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) {
    if (!corpus.at(id).has_reference()) out.push_back(id);
  }
  return out;
}

Dataset::Dataset(const corpus::Corpus& corpus, std::span<const std::string> image_ids,
                 DatasetOptions options)
    : ids_(image_ids.begin(), image_ids.end()), options_(options) {
  options_.policy.validate();
  if (options_.fusion == assessor::Fusion::FR) {
    if (const auto missing = without_reference(corpus, ids_); !missing.empty()) {
      throw IncompatibleFusionError(
          "FR fusion needs an image prompt for every sample; T2I records: " +
          join_ids(missing));
    }
  }
  samples_.reserve(ids_.size());
  for (const auto& id : ids_) {
    const auto& record = corpus.at(id);
    Sample s;
    s.generated = assessor::resize_for(assessor::load_rgb(record.image_path), options_.policy);
    if (options_.fusion != assessor::Fusion::NR && record.image_prompt_path) {
      s.reference =
          assessor::resize_for(assessor::load_rgb(*record.image_prompt_path), options_.policy);
    }
    if (options_.text) {
      try {
        s.text = options_.text->encode(record.text_prompt);
      } catch (const assessor::MissingTextError& e) {
        throw assessor::MissingTextError(id + ": " + e.what());
      }
    }
    samples_.push_back(std::move(s));
  }
}

assessor::Batch Dataset::batch(std::span<const std::size_t> indices, assessor::Mode mode,
                               util::Rng& rng) const {
  assessor::Batch b;
  const int text_dim = options_.text ? options_.text->dim() : 0;
  b.text = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(indices.size()), text_dim);
  b.generated.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Sample& s = samples_.at(indices[k]);
    b.generated.push_back(assessor::crop_and_normalize(s.generated, options_.policy,
                                                       options_.normalization, mode, rng));
    if (options_.fusion != assessor::Fusion::NR) {
      if (s.reference) {
        b.references.emplace_back(assessor::crop_and_normalize(
            *s.reference, options_.policy, options_.normalization, mode, rng));
      } else {
        b.references.emplace_back(std::nullopt);
      }
    }
    if (text_dim > 0) b.text.row(static_cast<Eigen::Index>(k)) = s.text.transpose();
  }
  return b;
}

Eigen::VectorXd Dataset::labels(const subjective::LabelTable& table,
                                subjective::Dimension dimension) const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(ids_.size()));
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const auto value = table.mos(ids_[i], dimension);
    if (!value) {
      missing.push_back(ids_[i]);
      continue;
    }
    y(static_cast<Eigen::Index>(i)) = *value;
  }
  if (!missing.empty()) throw MissingLabelsError(dimension, std::move(missing));
  return y;
}

}  // namespace aigiqa::harness
