#include "aigiqa/subjective/mos.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace aigiqa::subjective {

std::string_view to_string(Dimension dimension) {
  switch (dimension) {
    case Dimension::Quality: return "quality";
    case Dimension::Authenticity: return "authenticity";
    case Dimension::Correspondence: return "correspondence";
  }
  return "quality";
}

Dimension parse_dimension(std::string_view text) {
  for (const auto d : kDimensions) {
    if (to_string(d) == text) return d;
  }
  throw std::invalid_argument("unknown dimension `" + std::string(text) + "`");
}

bool is_on_grid(double score) {
  if (!std::isfinite(score)) return false;
  const double hundredths = score * 100.0;
  return std::abs(hundredths - std::round(hundredths)) < 1e-6;
}

bool in_range(double score) { return score >= kMinScore && score <= kMaxScore; }

double RatingEvent::score(Dimension dimension) const {
  switch (dimension) {
    case Dimension::Quality: return quality;
    case Dimension::Authenticity: return authenticity;
    case Dimension::Correspondence: return correspondence;
  }
  return quality;
}

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

InsufficientRatings::InsufficientRatings(std::vector<std::string> image_ids)
    : std::runtime_error(image_ids.empty()
                             ? std::string("insufficient ratings: at least two are required")
                             : "fewer than two ratings for: " + join_ids(image_ids)),
      image_ids_(std::move(image_ids)) {}

MeanStd compute_mean_std(std::span<const double> ratings) {
  const auto n = ratings.size();
  if (n < 2) throw InsufficientRatings({});
  double sum = 0.0;
  for (const double r : ratings) sum += r;
  const double mean = sum / static_cast<double>(n);
  double squares = 0.0;
  for (const double r : ratings) squares += (mean - r) * (mean - r);
  return {mean, std::sqrt(squares / static_cast<double>(n - 1))};
}

double confidence_epsilon(double stddev, std::size_t n) {
  if (n == 0 || stddev < 0.0) {
    throw std::invalid_argument("confidence_epsilon: need n >= 1 and stddev >= 0");
  }
  return kConfidenceZ * stddev / std::sqrt(static_cast<double>(n));
}

MosLabel compute_mos(std::string image_id, Dimension dimension,
                     std::span<const Rating> ratings) {
  if (ratings.size() < 2) throw InsufficientRatings({image_id});

  // Canonical order makes every floating-point sum independent of input order.
  std::vector<Rating> sorted(ratings.begin(), ratings.end());
  std::sort(sorted.begin(), sorted.end(), [](const Rating& a, const Rating& b) {
    return a.score != b.score ? a.score < b.score : a.evaluator_id < b.evaluator_id;
  });
  std::vector<double> scores;
  scores.reserve(sorted.size());
  for (const auto& r : sorted) scores.push_back(r.score);

  MosLabel label;
  label.image_id = std::move(image_id);
  label.dimension = dimension;
  label.rating_count = sorted.size();
  const auto stats = compute_mean_std(scores);
  label.mean = stats.mean;
  label.stddev = stats.stddev;
  label.epsilon = confidence_epsilon(stats.stddev, sorted.size());

  double kept_sum = 0.0;
  for (const auto& r : sorted) {
    if (std::abs(r.score - label.mean) <= label.epsilon) {
      kept_sum += r.score;
      ++label.kept_count;
    } else {
      label.discarded_ids.push_back(r.evaluator_id);
    }
  }
  if (label.kept_count == 0) {
    // Unreachable when some rating equals the mean; keep everything.
    label.mos = label.mean;
    label.kept_count = label.rating_count;
    label.discarded_ids.clear();
  } else {
    label.mos = kept_sum / static_cast<double>(label.kept_count);
  }
  std::sort(label.discarded_ids.begin(), label.discarded_ids.end());
  return label;
}

std::vector<MosLabel> compute_all_mos(std::span<const RatingEvent> events) {
  std::map<std::string, std::vector<const RatingEvent*>> by_image;
  for (const auto& e : events) by_image[e.image_id].push_back(&e);

  std::vector<std::string> short_images;
  for (const auto& [id, group] : by_image) {
    if (group.size() < 2) short_images.push_back(id);
    std::set<std::string_view> evaluators;
    for (const auto* e : group) {
      if (!evaluators.insert(e->evaluator_id).second) {
        throw std::invalid_argument("image " + id + " rated twice by " + e->evaluator_id);
      }
    }
  }
  if (!short_images.empty()) throw InsufficientRatings(std::move(short_images));

  std::vector<MosLabel> labels;
  labels.reserve(by_image.size() * kDimensions.size());
  std::vector<Rating> ratings;
  for (const auto& [id, group] : by_image) {
    for (const auto dimension : kDimensions) {
      ratings.clear();
      for (const auto* e : group) ratings.push_back({e->evaluator_id, e->score(dimension)});
      labels.push_back(compute_mos(id, dimension, ratings));
    }
  }
  return labels;
}

}  // namespace aigiqa::subjective
