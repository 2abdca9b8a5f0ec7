#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aigiqa/util/rng.hpp"

namespace aigiqa::assessor {

/// Two-layer score regressor: Linear(D_f, D_f/2) -> ReLU -> Linear(D_f/2, 1).
class RegressionHead {
 public:
  struct Cache {
    Eigen::MatrixXd input;        // (B, D_f)
    Eigen::MatrixXd pre_activation;  // (B, H)
  };

  struct Gradients {
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;
    double b2 = 0.0;
    Eigen::MatrixXd input;  // (B, D_f)
  };

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization.
  RegressionHead(int input_dim, util::Rng& rng);
  RegressionHead(Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::VectorXd w2, double b2);

  static int hidden_dim_for(int input_dim) { return input_dim / 2 > 0 ? input_dim / 2 : 1; }

  int input_dim() const { return static_cast<int>(w1_.cols()); }
  int hidden_dim() const { return static_cast<int>(w1_.rows()); }

  // One score per input row. Throws ShapeError on a column mismatch.
  Eigen::VectorXd forward(const Eigen::MatrixXd& features) const;
  Eigen::VectorXd forward(const Eigen::MatrixXd& features, Cache& cache) const;

  Gradients backward(const Cache& cache, const Eigen::VectorXd& grad_scores) const;

  // Blocks in the order w1, b1, w2, b2.
  std::vector<std::span<double>> parameter_blocks();
  static std::vector<std::vector<double>> flatten(const Gradients& g);

  const Eigen::MatrixXd& w1() const { return w1_; }
  const Eigen::VectorXd& b1() const { return b1_; }
  const Eigen::VectorXd& w2() const { return w2_; }
  double b2() const { return b2_; }

 private:
  void check_input(const Eigen::MatrixXd& features) const;

  Eigen::MatrixXd w1_;  // (H, D_f)
  Eigen::VectorXd b1_;  // (H)
  Eigen::VectorXd w2_;  // (H)
  double b2_ = 0.0;
};

}  // namespace aigiqa::assessor
