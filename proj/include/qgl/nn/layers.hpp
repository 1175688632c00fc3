#pragma once

#include <span>
#include <string>
#include <vector>

#include "qgl/core/rng.hpp"
#include "qgl/nn/ops.hpp"
#include "qgl/nn/tensor.hpp"

namespace qgl::nn {

struct NamedParameter {
  std::string name;
  Tensor tensor;
};
using ParameterList = std::vector<NamedParameter>;

std::size_t count_values(const ParameterList& params);
void append(ParameterList& into, const std::string& prefix, const ParameterList& from);

/// y = x W + b with W: in x out. Weights and bias start uniform in +-1/sqrt(in).
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t in, std::size_t out, Rng& rng);

  Tensor operator()(const Tensor& x) const { return add_row(matmul(x, weight_), bias_); }
  /// Graph-free evaluation for frozen inference.
  Matrix apply(const Matrix& x) const;

  std::size_t in_features() const { return weight_.rows(); }
  std::size_t out_features() const { return weight_.cols(); }
  Tensor& weight() { return weight_; }
  Tensor& bias() { return bias_; }
  const Tensor& weight() const { return weight_; }
  const Tensor& bias() const { return bias_; }
  ParameterList parameters() const { return {{"weight", weight_}, {"bias", bias_}}; }

 private:
  Tensor weight_;
  Tensor bias_;
};

/// Class-embedding table, n_classes x dim, initialized N(0, 1).
class Embedding {
 public:
  Embedding() = default;
  Embedding(std::size_t n_classes, std::size_t dim, Rng& rng);

  Tensor operator()(std::span<const int> labels) const { return embedding_lookup(table_, labels); }
  const Tensor& table() const { return table_; }
  Tensor& table() { return table_; }
  std::size_t n_classes() const { return table_.rows(); }
  std::size_t dim() const { return table_.cols(); }

 private:
  Tensor table_;
};

}  // namespace qgl::nn
