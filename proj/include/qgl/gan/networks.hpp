#pragma once

#include <span>

#include "qgl/core/rng.hpp"
#include "qgl/metrics/metrics.hpp"
#include "qgl/nn/layers.hpp"

namespace qgl::gan {

struct NetConfig {
  std::size_t latent_dim = 64;
  std::size_t n_classes = 10;
  std::size_t pixels = 196;
  std::size_t g_hidden1 = 256;
  std::size_t g_hidden2 = 512;
  std::size_t d_hidden1 = 512;
  std::size_t d_hidden2 = 256;
  double leaky_slope = 0.2;
};

/// G(z, c) = tanh(L3 a(L2 a(L1 (z * emb(c))))), a = leaky ReLU.
class GeneratorNet {
 public:
  GeneratorNet(const NetConfig& config, Rng& rng);

  nn::Tensor forward(const nn::Tensor& z, std::span<const int> labels) const;
  /// Same map evaluated without a graph.
  nn::Matrix sample(const nn::Matrix& z, std::span<const int> labels) const;

  const nn::Embedding& embedding() const { return embedding_; }
  nn::ParameterList parameters() const;
  const NetConfig& config() const { return config_; }

 private:
  NetConfig config_;
  nn::Embedding embedding_;
  nn::Dense l1_, l2_, l3_;
};

/// Shared trunk (pixels -> 512 -> 256, leaky ReLU) with a 1-logit source
/// head and an n_classes-logit class head.
class DiscriminatorNet {
 public:
  struct Output {
    nn::Tensor source;
    nn::Tensor classes;
  };

  DiscriminatorNet(const NetConfig& config, Rng& rng);

  Output forward(const nn::Tensor& images) const;
  nn::ParameterList parameters() const;
  void set_trainable(bool trainable);

 private:
  NetConfig config_;
  nn::Dense t1_, t2_, source_head_, class_head_;
};

/// Adapts a generator to the metrics interface; z ~ N(0, I) from the caller's stream.
class GeneratorSampler final : public metrics::SampleGenerator {
 public:
  explicit GeneratorSampler(const GeneratorNet& generator) : generator_(generator) {}
  nn::Matrix generate(std::span<const int> labels, Rng& rng) const override;

 private:
  const GeneratorNet& generator_;
};

nn::Matrix standard_normal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace qgl::gan
