#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aigiqa::subjective {

enum class Dimension { Quality, Authenticity, Correspondence };

inline constexpr std::array<Dimension, 3> kDimensions{
    Dimension::Quality, Dimension::Authenticity, Dimension::Correspondence};

std::string_view to_string(Dimension dimension);
Dimension parse_dimension(std::string_view text);

// z-value of the two-sided 95% confidence interval used for rejection.
inline constexpr double kConfidenceZ = 1.96;

inline constexpr double kMinScore = 0.0;
inline constexpr double kMaxScore = 5.0;

// Scores are entered on a 0.01 grid.
bool is_on_grid(double score);
bool in_range(double score);

/// One evaluator's three scores for one image.
struct RatingEvent {
  std::string image_id;
  std::string evaluator_id;
  int stage = 1;
  double quality = 0.0;
  double authenticity = 0.0;
  double correspondence = 0.0;
  std::string timestamp;  // ISO-8601 UTC

  double score(Dimension dimension) const;
};

struct Rating {
  std::string evaluator_id;
  double score = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Per-image, per-dimension label together with the rejection audit trail.
struct MosLabel {
  std::string image_id;
  Dimension dimension = Dimension::Quality;
  double mean = 0.0;
  double stddev = 0.0;
  double epsilon = 0.0;
  std::size_t rating_count = 0;  // N
  std::size_t kept_count = 0;    // M
  std::vector<std::string> discarded_ids;
  double mos = 0.0;

  bool operator==(const MosLabel&) const = default;
};

class InsufficientRatings : public std::runtime_error {
 public:
  explicit InsufficientRatings(std::vector<std::string> image_ids);

  const std::vector<std::string>& image_ids() const { return image_ids_; }

 private:
  std::vector<std::string> image_ids_;
};

// Sample mean and standard deviation (divisor N-1). Requires N >= 2.
MeanStd compute_mean_std(std::span<const double> ratings);

// 1.96 * stddev / sqrt(n).
double confidence_epsilon(double stddev, std::size_t n);

/// Single-pass confidence-interval rejection: every rating with
/// |r - mean| <= epsilon (closed interval, statistics over all N ratings) is
/// kept, and the MOS is the mean of the kept ratings. The result does not
/// depend on the order of `ratings`.
MosLabel compute_mos(std::string image_id, Dimension dimension,
                     std::span<const Rating> ratings);

/// One label per (image, dimension), ordered by image_id then dimension.
/// All ratings of an image form one group regardless of stage. Throws
/// std::invalid_argument when an evaluator rated an image twice and
/// InsufficientRatings listing every image with fewer than two ratings.
std::vector<MosLabel> compute_all_mos(std::span<const RatingEvent> events);

}  // namespace aigiqa::subjective
