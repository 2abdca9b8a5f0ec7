#include "aigiqa/assessor/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace aigiqa::assessor {

Adam::Adam(std::vector<std::span<double>> parameters, AdamOptions options)
    : parameters_(std::move(parameters)), options_(options) {
  for (const auto& p : parameters_) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void Adam::step(const std::vector<std::vector<double>>& gradients) {
  if (gradients.size() != parameters_.size()) {
    throw std::invalid_argument("adam: gradient block count mismatch");
  }
  ++step_;
  const double bias1 = 1.0 - std::pow(options_.beta1, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(options_.beta2, static_cast<double>(step_));
  for (std::size_t b = 0; b < parameters_.size(); ++b) {
    auto params = parameters_[b];
    const auto& grad = gradients[b];
    if (grad.size() != params.size()) {
      throw std::invalid_argument("adam: gradient block size mismatch");
    }
    auto& m = m_[b];
    auto& v = v_[b];
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = grad[i] + options_.weight_decay * params[i];
      m[i] = options_.beta1 * m[i] + (1.0 - options_.beta1) * g;
      v[i] = options_.beta2 * v[i] + (1.0 - options_.beta2) * g * g;
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      params[i] -= options_.learning_rate * m_hat / (std::sqrt(v_hat) + options_.epsilon);
    }
  }
}

}  // namespace aigiqa::assessor
