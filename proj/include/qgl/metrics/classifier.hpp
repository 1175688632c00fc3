#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "qgl/core/rng.hpp"
#include "qgl/data/dataset.hpp"
#include "qgl/nn/layers.hpp"

namespace qgl::metrics {

/// Dense image -> 256 (ReLU features) -> n_classes network. Once frozen it is
/// evaluated graph-free and is safe to share across threads.
class FeatureClassifier {
 public:
  static constexpr std::size_t kFeatureDim = 256;

  FeatureClassifier(std::size_t pixels, std::size_t n_classes, Rng& rng,
                    std::size_t feature_dim = kFeatureDim);

  nn::Matrix features(const nn::Matrix& images) const;
  nn::Matrix logits(const nn::Matrix& images) const;
  nn::Matrix posteriors(const nn::Matrix& images) const;
  std::vector<int> predict(const nn::Matrix& images) const;

  /// Training-time forward pass (records a graph).
  nn::Tensor forward(const nn::Tensor& images) const;

  void freeze(double test_accuracy);
  bool frozen() const noexcept { return frozen_; }
  double test_accuracy() const noexcept { return test_accuracy_; }
  /// Throws StateError unless frozen.
  void require_frozen() const;

  std::size_t pixels() const { return feature_layer_.in_features(); }
  std::size_t n_classes() const { return output_layer_.out_features(); }
  std::size_t feature_dim() const { return feature_layer_.out_features(); }
  nn::Dense& feature_layer() { return feature_layer_; }
  nn::Dense& output_layer() { return output_layer_; }
  nn::ParameterList parameters() const;

 private:
  nn::Dense feature_layer_;
  nn::Dense output_layer_;
  bool frozen_ = false;
  double test_accuracy_ = 0.0;
};

struct ClassifierTrainConfig {
  std::size_t epochs = 4;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 7;
};

/// Trains on `train`, measures accuracy on `test`, returns the frozen model.
FeatureClassifier train_feature_classifier(const data::Dataset& train, const data::Dataset& test,
                                           const ClassifierTrainConfig& config = {});

double dataset_accuracy(const FeatureClassifier& classifier, const data::Dataset& dataset);

/// Weights go through the QGL1 checkpoint; dimensions and test accuracy to <path>.meta.json.
void save_classifier(const std::filesystem::path& path, const FeatureClassifier& classifier);
FeatureClassifier load_classifier(const std::filesystem::path& path);

}  // namespace qgl::metrics
