#include "qgl/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace qgl::nn {

std::size_t count_values(const ParameterList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.tensor.size();
  return n;
}

void append(ParameterList& into, const std::string& prefix, const ParameterList& from) {
  for (const auto& p : from) into.push_back({prefix + "." + p.name, p.tensor});
}

Dense::Dense(std::size_t in, std::size_t out, Rng& rng) {
  if (in == 0 || out == 0) throw std::invalid_argument("Dense: zero-sized layer");
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Matrix w(in, out);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
  Matrix b(1, out);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.uniform(-bound, bound);
  weight_ = Tensor::parameter(std::move(w));
  bias_ = Tensor::parameter(std::move(b));
}

Matrix Dense::apply(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != in_features()) {
    throw std::invalid_argument("Dense::apply: input width mismatch");
  }
  Matrix y = x * weight_.value();
  y.rowwise() += bias_.value().row(0);
  return y;
}

Embedding::Embedding(std::size_t n_classes, std::size_t dim, Rng& rng) {
  if (n_classes == 0 || dim == 0) throw std::invalid_argument("Embedding: zero-sized table");
  Matrix t(n_classes, dim);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal();
  table_ = Tensor::parameter(std::move(t));
}

}  // namespace qgl::nn
