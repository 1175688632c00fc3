#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>

#include "qgl/nn/tensor.hpp"

namespace qgl::testing {

/// Largest |analytic - numeric| / max(|analytic|, |numeric|, 1e-3) over every
/// entry of `param`, with central differences of step h.
inline double gradient_error(nn::Tensor param, const std::function<nn::Tensor()>& loss_fn,
                             double h = 1e-6) {
  param.clear_grad();
  nn::backward(loss_fn());
  const nn::Matrix analytic = param.grad();
  double worst = 0.0;
  nn::Matrix& v = param.mutable_value();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double saved = v.data()[i];
    v.data()[i] = saved + h;
    const double up = loss_fn().item();
    v.data()[i] = saved - h;
    const double down = loss_fn().item();
    v.data()[i] = saved;
    const double numeric = (up - down) / (2 * h);
    const double a = analytic.data()[i];
    const double scale = std::max({std::abs(a), std::abs(numeric), 1e-3});
    worst = std::max(worst, std::abs(a - numeric) / scale);
  }
  return worst;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qgl-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace qgl::testing
