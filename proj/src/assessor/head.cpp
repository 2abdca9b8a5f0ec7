#include "aigiqa/assessor/head.hpp"

#include <cmath>

#include "aigiqa/assessor/backbone.hpp"

namespace aigiqa::assessor {

RegressionHead::RegressionHead(int input_dim, util::Rng& rng) {
  if (input_dim < 1) throw std::invalid_argument("regression head: input_dim must be >= 1");
  const int hidden = hidden_dim_for(input_dim);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  w1_.resize(hidden, input_dim);
  b1_.resize(hidden);
  w2_.resize(hidden);
  for (Eigen::Index j = 0; j < w1_.cols(); ++j) {
    for (Eigen::Index i = 0; i < w1_.rows(); ++i) w1_(i, j) = rng.uniform(-bound1, bound1);
  }
  for (Eigen::Index i = 0; i < hidden; ++i) b1_(i) = rng.uniform(-bound1, bound1);
  for (Eigen::Index i = 0; i < hidden; ++i) w2_(i) = rng.uniform(-bound2, bound2);
  b2_ = rng.uniform(-bound2, bound2);
}

RegressionHead::RegressionHead(Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::VectorXd w2,
                               double b2)
    : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(b2) {
  if (w1_.rows() < 1 || w1_.cols() < 1 || b1_.size() != w1_.rows() ||
      w2_.size() != w1_.rows()) {
    throw std::invalid_argument("regression head: inconsistent weight shapes");
  }
}

void RegressionHead::check_input(const Eigen::MatrixXd& features) const {
  if (features.cols() != w1_.cols()) {
    throw ShapeError("regression head expects " + std::to_string(w1_.cols()) +
                     " input features, got " + std::to_string(features.cols()));
  }
}

Eigen::VectorXd RegressionHead::forward(const Eigen::MatrixXd& features) const {
  Cache cache;
  return forward(features, cache);
}

Eigen::VectorXd RegressionHead::forward(const Eigen::MatrixXd& features, Cache& cache) const {
  check_input(features);
  cache.input = features;
  cache.pre_activation = (features * w1_.transpose()).rowwise() + b1_.transpose();
  const Eigen::MatrixXd hidden = cache.pre_activation.cwiseMax(0.0);
  return (hidden * w2_).array() + b2_;
}

RegressionHead::Gradients RegressionHead::backward(const Cache& cache,
                                                   const Eigen::VectorXd& grad_scores) const {
  if (grad_scores.size() != cache.input.rows()) {
    throw ShapeError("regression head: gradient length mismatch");
  }
  const Eigen::MatrixXd hidden = cache.pre_activation.cwiseMax(0.0);
  Gradients g;
  g.w2 = hidden.transpose() * grad_scores;
  g.b2 = grad_scores.sum();
  Eigen::MatrixXd grad_pre = grad_scores * w2_.transpose();  // (B, H)
  grad_pre.array() *= (cache.pre_activation.array() > 0.0).cast<double>();
  g.w1 = grad_pre.transpose() * cache.input;
  g.b1 = grad_pre.colwise().sum().transpose();
  g.input = grad_pre * w1_;
  return g;
}

std::vector<std::span<double>> RegressionHead::parameter_blocks() {
  return {std::span<double>(w1_.data(), static_cast<std::size_t>(w1_.size())),
          std::span<double>(b1_.data(), static_cast<std::size_t>(b1_.size())),
          std::span<double>(w2_.data(), static_cast<std::size_t>(w2_.size())),
          std::span<double>(&b2_, 1)};
}

std::vector<std::vector<double>> RegressionHead::flatten(const Gradients& g) {
  return {std::vector<double>(g.w1.data(), g.w1.data() + g.w1.size()),
          std::vector<double>(g.b1.data(), g.b1.data() + g.b1.size()),
          std::vector<double>(g.w2.data(), g.w2.data() + g.w2.size()),
          std::vector<double>{g.b2}};
}

}  // namespace aigiqa::assessor
