#pragma once

#include <cstdint>

#include "aigiqa/assessor/model.hpp"
#include "aigiqa/util/rng.hpp"

namespace aigiqa::support {

// CHW tensor of uniform values in [-1, 1].
assessor::ImageTensor random_image(util::Rng& rng, int size);

// Seeded PR batch of stub features through a small stub backbone and head:
// two samples with references and two padded ones.
struct GradientCheckCase {
  assessor::Assessor model;
  assessor::Batch batch;
  Eigen::VectorXd labels;
};

GradientCheckCase gradient_check_case(std::uint64_t seed);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t parameters = 0;
};

// Compares the analytic MSE gradient (head and backbone) with central
// differences of step h. Relative error: |a - n| / max(|a|, |n|, 1e-8).
GradientCheckResult gradient_check(GradientCheckCase& c, double h = 1e-5);

}  // namespace aigiqa::support
