#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qgl/core/rng.hpp"
#include "qgl/metrics/classifier.hpp"
#include "qgl/nn/tensor.hpp"

namespace qgl::metrics {

/// Anything that turns class labels into images (one row per label).
class SampleGenerator {
 public:
  virtual ~SampleGenerator() = default;
  virtual nn::Matrix generate(std::span<const int> labels, Rng& rng) const = 0;
};

/// Uniformly drawn class labels.
std::vector<int> draw_labels(std::size_t n, std::size_t n_classes, Rng& rng);

struct AccuracyResult {
  double accuracy = 0.0;
  bool empty_sample_warning = false;
};

/// Fraction of generated samples whose argmax posterior matches the
/// conditioning label. n_samples = 0 yields 0 with the warning flag set.
AccuracyResult classifier_accuracy(const FeatureClassifier& classifier,
                                   const SampleGenerator& generator, Rng& rng,
                                   std::size_t n_samples = 500);

struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
};

/// Sample mean and unbiased (n - 1) covariance of feature rows.
GaussianSummary summarize(const nn::Matrix& features);

inline constexpr double kFidCovarianceEpsilon = 1e-6;
inline constexpr double kFidEigenClamp = 1e-8;

/// |mu1 - mu2|^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2}) with S = Sigma + eps I.
/// The trace of the square root is taken from the eigenvalues of
/// S1^{1/2} S2 S1^{1/2}; eigenvalues below the clamp count as zero.
double frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

/// Frechet distance between the generator's features and a reference summary.
double generator_fid(const FeatureClassifier& classifier, const SampleGenerator& generator,
                     const GaussianSummary& reference, Rng& rng, std::size_t n_samples = 1000);

/// Mean over splits of exp(mean_x KL(p(y|x) || p_bar(y))). Rows are posteriors.
double inception_score_from_posteriors(const nn::Matrix& posteriors, std::size_t splits);

double inception_score_analog(const FeatureClassifier& classifier,
                              const SampleGenerator& generator, Rng& rng,
                              std::size_t n_samples = 1000, std::size_t splits = 10);

/// Mean over unordered pairs of |u - u'| / sqrt(dim), u = f / |f|.
double mean_pairwise_distance(const nn::Matrix& features);

/// Per class: mean pairwise normalized feature distance over per_class
/// samples; then the average across classes. per_class < 2 throws.
double intra_class_diversity(const FeatureClassifier& classifier, const SampleGenerator& generator,
                             Rng& rng, std::size_t per_class = 100);

struct EvalConfig {
  std::size_t accuracy_samples = 500;
  std::size_t score_samples = 1000;
  std::size_t score_splits = 10;
  std::size_t diversity_per_class = 100;
};

struct EvalResult {
  double accuracy = 0.0;
  double fid = 0.0;
  double inception_score = 0.0;
  double diversity = 0.0;
};

/// Frozen classifier plus real-data reference statistics; read-only once built.
class Evaluator {
 public:
  Evaluator(const FeatureClassifier& classifier, const data::Dataset& reference,
            EvalConfig config = {}, std::size_t reference_samples = 2000);

  /// Draws from Rng(seed, "metrics", epoch) only.
  EvalResult evaluate(const SampleGenerator& generator, std::uint64_t seed,
                      std::size_t epoch) const;

  const FeatureClassifier& classifier() const { return classifier_; }
  const GaussianSummary& reference() const { return reference_; }
  const EvalConfig& config() const { return config_; }

 private:
  const FeatureClassifier& classifier_;
  GaussianSummary reference_;
  EvalConfig config_;
};

}  // namespace qgl::metrics
