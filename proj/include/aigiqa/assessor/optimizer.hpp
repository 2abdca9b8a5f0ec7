#pragma once

#include <span>
#include <vector>

namespace aigiqa::assessor {

struct AdamOptions {
  double learning_rate = 1e-4;
  double weight_decay = 1e-5;  // L2 penalty folded into the gradient
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam over a fixed list of parameter blocks. The block layout passed to
/// step() must match the one given at construction.
class Adam {
 public:
  Adam(std::vector<std::span<double>> parameters, AdamOptions options);

  void step(const std::vector<std::vector<double>>& gradients);

  long steps() const { return step_; }

 private:
  std::vector<std::span<double>> parameters_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long step_ = 0;
};

}  // namespace aigiqa::assessor
