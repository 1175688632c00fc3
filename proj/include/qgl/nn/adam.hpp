#pragma once

#include <cstddef>
#include <vector>

#include "qgl/nn/layers.hpp"

namespace qgl::nn {

struct AdamConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moments are sized to the parameters at
/// construction and updated in place by step().
class Adam {
 public:
  Adam(ParameterList params, AdamConfig config = {});

  /// Throws StateError if any parameter has no populated gradient.
  void step();
  void zero_grad();

  std::size_t step_count() const noexcept { return steps_; }
  const AdamConfig& config() const noexcept { return config_; }
  const ParameterList& parameters() const noexcept { return params_; }

 private:
  ParameterList params_;
  AdamConfig config_;
  std::vector<Matrix> first_;
  std::vector<Matrix> second_;
  std::size_t steps_ = 0;
};

}  // namespace qgl::nn
