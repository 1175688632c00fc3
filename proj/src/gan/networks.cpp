#include "qgl/gan/networks.hpp"

#include "qgl/nn/ops.hpp"

namespace qgl::gan {
namespace {
nn::Matrix leaky(nn::Matrix x, double slope) {
  return x.unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
}
}  // namespace

nn::Matrix standard_normal(std::size_t rows, std::size_t cols, Rng& rng) {
  nn::Matrix z(rows, cols);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal();
  return z;
}

GeneratorNet::GeneratorNet(const NetConfig& config, Rng& rng)
    : config_(config),
      embedding_(config.n_classes, config.latent_dim, rng),
      l1_(config.latent_dim, config.g_hidden1, rng),
      l2_(config.g_hidden1, config.g_hidden2, rng),
      l3_(config.g_hidden2, config.pixels, rng) {}

nn::Tensor GeneratorNet::forward(const nn::Tensor& z, std::span<const int> labels) const {
  const double a = config_.leaky_slope;
  nn::Tensor x = nn::mul(z, embedding_(labels));
  x = nn::leaky_relu(l1_(x), a);
  x = nn::leaky_relu(l2_(x), a);
  return nn::tanh(l3_(x));
}

nn::Matrix GeneratorNet::sample(const nn::Matrix& z, std::span<const int> labels) const {
  nn::Matrix x(z.rows(), z.cols());
  const nn::Matrix& table = embedding_.table().value();
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    x.row(r) = z.row(r).cwiseProduct(table.row(labels[static_cast<std::size_t>(r)]));
  }
  const double a = config_.leaky_slope;
  x = leaky(l1_.apply(x), a);
  x = leaky(l2_.apply(x), a);
  return l3_.apply(x).array().tanh();
}

nn::ParameterList GeneratorNet::parameters() const {
  nn::ParameterList out{{"embedding", embedding_.table()}};
  nn::append(out, "l1", l1_.parameters());
  nn::append(out, "l2", l2_.parameters());
  nn::append(out, "l3", l3_.parameters());
  return out;
}

DiscriminatorNet::DiscriminatorNet(const NetConfig& config, Rng& rng)
    : config_(config),
      t1_(config.pixels, config.d_hidden1, rng),
      t2_(config.d_hidden1, config.d_hidden2, rng),
      source_head_(config.d_hidden2, 1, rng),
      class_head_(config.d_hidden2, config.n_classes, rng) {}

DiscriminatorNet::Output DiscriminatorNet::forward(const nn::Tensor& images) const {
  const double a = config_.leaky_slope;
  nn::Tensor h = nn::leaky_relu(t1_(images), a);
  h = nn::leaky_relu(t2_(h), a);
  return {source_head_(h), class_head_(h)};
}

nn::ParameterList DiscriminatorNet::parameters() const {
  nn::ParameterList out;
  nn::append(out, "trunk1", t1_.parameters());
  nn::append(out, "trunk2", t2_.parameters());
  nn::append(out, "source", source_head_.parameters());
  nn::append(out, "class", class_head_.parameters());
  return out;
}

void DiscriminatorNet::set_trainable(bool trainable) {
  for (auto& p : parameters()) p.tensor.node()->requires_grad = trainable;
}

nn::Matrix GeneratorSampler::generate(std::span<const int> labels, Rng& rng) const {
  const nn::Matrix z = standard_normal(labels.size(), generator_.config().latent_dim, rng);
  return generator_.sample(z, labels);
}

}  // namespace qgl::gan
