#include "qgl/nn/adam.hpp"

#include <cmath>

#include "qgl/core/errors.hpp"

namespace qgl::nn {

Adam::Adam(ParameterList params, AdamConfig config) : params_(std::move(params)), config_(config) {
  for (const auto& p : params_) {
    first_.push_back(Matrix::Zero(p.tensor.value().rows(), p.tensor.value().cols()));
    second_.push_back(Matrix::Zero(p.tensor.value().rows(), p.tensor.value().cols()));
  }
}

void Adam::step() {
  for (const auto& p : params_) {
    if (!p.tensor.has_grad()) throw StateError("Adam::step: parameter '" + p.name + "' has no gradient");
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor param = params_[i].tensor;
    const Matrix& g = param.grad();
    first_[i] = config_.beta1 * first_[i] + (1.0 - config_.beta1) * g;
    second_[i] = config_.beta2 * second_[i] + (1.0 - config_.beta2) * g.cwiseProduct(g);
    auto m_hat = first_[i].array() / correction1;
    auto v_hat = second_[i].array() / correction2;
    param.mutable_value().array() -= config_.learning_rate * m_hat / (v_hat.sqrt() + config_.epsilon);
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

}  // namespace qgl::nn
