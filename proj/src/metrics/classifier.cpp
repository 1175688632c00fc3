#include "qgl/metrics/classifier.hpp"

#include <json.hpp>
#include <stdexcept>

#include "qgl/core/errors.hpp"
#include "qgl/core/io.hpp"
#include "qgl/nn/adam.hpp"
#include "qgl/nn/checkpoint.hpp"
#include "qgl/nn/ops.hpp"

namespace qgl::metrics {

FeatureClassifier::FeatureClassifier(std::size_t pixels, std::size_t n_classes, Rng& rng,
                                     std::size_t feature_dim)
    : feature_layer_(pixels, feature_dim, rng), output_layer_(feature_dim, n_classes, rng) {}

nn::Matrix FeatureClassifier::features(const nn::Matrix& images) const {
  return feature_layer_.apply(images).cwiseMax(0.0);
}

nn::Matrix FeatureClassifier::logits(const nn::Matrix& images) const {
  return output_layer_.apply(features(images));
}

nn::Matrix FeatureClassifier::posteriors(const nn::Matrix& images) const {
  nn::Matrix z = logits(images);
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double m = z.row(r).maxCoeff();
    z.row(r) = (z.row(r).array() - m).exp();
    z.row(r) /= z.row(r).sum();
  }
  return z;
}

std::vector<int> FeatureClassifier::predict(const nn::Matrix& images) const {
  const nn::Matrix z = logits(images);
  std::vector<int> out(static_cast<std::size_t>(z.rows()));
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    Eigen::Index arg = 0;
    z.row(r).maxCoeff(&arg);
    out[static_cast<std::size_t>(r)] = static_cast<int>(arg);
  }
  return out;
}

nn::Tensor FeatureClassifier::forward(const nn::Tensor& images) const {
  return output_layer_(nn::relu(feature_layer_(images)));
}

void FeatureClassifier::freeze(double test_accuracy) {
  frozen_ = true;
  test_accuracy_ = test_accuracy;
}

void FeatureClassifier::require_frozen() const {
  if (!frozen_) throw StateError("feature classifier must be frozen before computing metrics");
}

nn::ParameterList FeatureClassifier::parameters() const {
  nn::ParameterList out;
  nn::append(out, "features", feature_layer_.parameters());
  nn::append(out, "output", output_layer_.parameters());
  return out;
}

double dataset_accuracy(const FeatureClassifier& classifier, const data::Dataset& dataset) {
  if (dataset.size() == 0) return 0.0;
  const auto pred = classifier.predict(dataset.images);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == dataset.labels[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

FeatureClassifier train_feature_classifier(const data::Dataset& train, const data::Dataset& test,
                                           const ClassifierTrainConfig& config) {
  Rng init(config.seed, "classifier_init");
  FeatureClassifier clf(train.pixels(), train.n_classes, init);
  nn::AdamConfig adam_cfg;
  adam_cfg.learning_rate = config.learning_rate;
  adam_cfg.beta1 = 0.9;
  nn::Adam opt(clf.parameters(), adam_cfg);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = data::shuffled_indices(train.size(), config.seed, epoch);
    for (std::size_t at = 0; at + config.batch_size <= order.size(); at += config.batch_size) {
      std::span<const std::size_t> rows(order.data() + at, config.batch_size);
      const auto labels = train.gather_labels(rows);
      opt.zero_grad();
      nn::backward(nn::cross_entropy(clf.forward(nn::Tensor::constant(train.gather(rows))), labels));
      opt.step();
    }
  }
  clf.freeze(dataset_accuracy(clf, test));
  return clf;
}

void save_classifier(const std::filesystem::path& path, const FeatureClassifier& classifier) {
  nn::save_checkpoint(path, classifier.parameters());
  nlohmann::json meta = {{"pixels", classifier.pixels()},
                         {"n_classes", classifier.n_classes()},
                         {"feature_dim", classifier.feature_dim()},
                         {"frozen", classifier.frozen()},
                         {"test_accuracy", classifier.test_accuracy()}};
  auto meta_path = path;
  meta_path += ".meta.json";
  write_file_atomic(meta_path, meta.dump(2) + "\n");
}

FeatureClassifier load_classifier(const std::filesystem::path& path) {
  auto meta_path = path;
  meta_path += ".meta.json";
  const auto meta = nlohmann::json::parse(read_file(meta_path));
  Rng unused(0);
  FeatureClassifier clf(meta.at("pixels").get<std::size_t>(), meta.at("n_classes").get<std::size_t>(),
                        unused, meta.at("feature_dim").get<std::size_t>());
  auto params = clf.parameters();
  nn::load_checkpoint(path, params);
  if (meta.at("frozen").get<bool>()) clf.freeze(meta.at("test_accuracy").get<double>());
  return clf;
}

}  // namespace qgl::metrics
