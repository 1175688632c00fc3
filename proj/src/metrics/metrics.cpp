#include "qgl/metrics/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qgl::metrics {

std::vector<int> draw_labels(std::size_t n, std::size_t n_classes, Rng& rng) {
  std::vector<int> out(n);
  for (auto& y : out) y = static_cast<int>(rng.index(n_classes));
  return out;
}

AccuracyResult classifier_accuracy(const FeatureClassifier& classifier,
                                   const SampleGenerator& generator, Rng& rng,
                                   std::size_t n_samples) {
  classifier.require_frozen();
  if (n_samples == 0) return {0.0, true};
  const auto labels = draw_labels(n_samples, classifier.n_classes(), rng);
  const auto pred = classifier.predict(generator.generate(labels, rng));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples; ++i) hits += pred[i] == labels[i];
  return {static_cast<double>(hits) / static_cast<double>(n_samples), false};
}

GaussianSummary summarize(const nn::Matrix& features) {
  if (features.rows() < 2) throw std::invalid_argument("summarize: need at least two rows");
  GaussianSummary s;
  s.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - s.mean.transpose();
  s.covariance = (centered.transpose() * centered) / static_cast<double>(features.rows() - 1);
  s.covariance = 0.5 * (s.covariance + s.covariance.transpose());
  return s;
}

double frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
  if (a.dim() != b.dim() || a.covariance.rows() != b.covariance.rows()) {
    throw std::invalid_argument("frechet_distance: summaries have different dimensions");
  }
  const auto n = static_cast<Eigen::Index>(a.dim());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd s1 = a.covariance + kFidCovarianceEpsilon * eye;
  const Eigen::MatrixXd s2 = b.covariance + kFidCovarianceEpsilon * eye;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig1(s1);
  const Eigen::VectorXd root_vals = eig1.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd s1_half =
      eig1.eigenvectors() * root_vals.asDiagonal() * eig1.eigenvectors().transpose();
  Eigen::MatrixXd m = s1_half * s2 * s1_half;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig2(m, Eigen::EigenvaluesOnly);
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig2.eigenvalues()(i);
    if (lambda >= kFidEigenClamp) trace_sqrt += std::sqrt(lambda);
  }
  const double mean_term = (a.mean - b.mean).squaredNorm();
  const double fid = mean_term + s1.trace() + s2.trace() - 2.0 * trace_sqrt;
  return std::max(fid, 0.0);
}

double generator_fid(const FeatureClassifier& classifier, const SampleGenerator& generator,
                     const GaussianSummary& reference, Rng& rng, std::size_t n_samples) {
  classifier.require_frozen();
  const auto labels = draw_labels(n_samples, classifier.n_classes(), rng);
  return frechet_distance(summarize(classifier.features(generator.generate(labels, rng))), reference);
}

double inception_score_from_posteriors(const nn::Matrix& posteriors, std::size_t splits) {
  const auto n = static_cast<std::size_t>(posteriors.rows());
  if (splits == 0 || n < splits) {
    throw std::invalid_argument("inception score: need at least one sample per split");
  }
  double total = 0.0;
  for (std::size_t s = 0; s < splits; ++s) {
    const std::size_t begin = s * n / splits;
    const std::size_t end = (s + 1) * n / splits;
    const auto block = posteriors.middleRows(static_cast<Eigen::Index>(begin),
                                             static_cast<Eigen::Index>(end - begin));
    // Mean taken about the first row: identical rows give that row exactly.
    const Eigen::RowVectorXd first = block.row(0);
    const Eigen::RowVectorXd marginal = first + (block.rowwise() - first).colwise().mean();
    double kl_sum = 0.0;
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index k = 0; k < block.cols(); ++k) {
        const double p = block(r, k);
        if (p > 0.0) kl_sum += p * (std::log(p) - std::log(marginal(k)));
      }
    }
    total += std::exp(kl_sum / static_cast<double>(block.rows()));
  }
  return total / static_cast<double>(splits);
}

double inception_score_analog(const FeatureClassifier& classifier,
                              const SampleGenerator& generator, Rng& rng, std::size_t n_samples,
                              std::size_t splits) {
  classifier.require_frozen();
  const auto labels = draw_labels(n_samples, classifier.n_classes(), rng);
  return inception_score_from_posteriors(classifier.posteriors(generator.generate(labels, rng)),
                                         splits);
}

double mean_pairwise_distance(const nn::Matrix& features) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw std::invalid_argument("mean_pairwise_distance: need at least two rows");
  nn::Matrix unit = features;
  for (Eigen::Index r = 0; r < n; ++r) {
    const double norm = unit.row(r).norm();
    if (norm > 0.0) unit.row(r) /= norm;
  }
  const double inv_sqrt_dim = 1.0 / std::sqrt(static_cast<double>(features.cols()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) total += (unit.row(i) - unit.row(j)).norm();
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return total * inv_sqrt_dim / pairs;
}

double intra_class_diversity(const FeatureClassifier& classifier, const SampleGenerator& generator,
                             Rng& rng, std::size_t per_class) {
  classifier.require_frozen();
  if (per_class < 2) throw std::invalid_argument("intra_class_diversity: per_class must be >= 2");
  double total = 0.0;
  for (std::size_t c = 0; c < classifier.n_classes(); ++c) {
    const std::vector<int> labels(per_class, static_cast<int>(c));
    total += mean_pairwise_distance(classifier.features(generator.generate(labels, rng)));
  }
  return total / static_cast<double>(classifier.n_classes());
}

Evaluator::Evaluator(const FeatureClassifier& classifier, const data::Dataset& reference,
                     EvalConfig config, std::size_t reference_samples)
    : classifier_(classifier), config_(config) {
  classifier.require_frozen();
  const auto n = std::min<std::size_t>(reference_samples, reference.size());
  if (n < 2) throw std::invalid_argument("Evaluator: reference set needs at least two images");
  reference_ = summarize(classifier.features(reference.images.topRows(static_cast<Eigen::Index>(n))));
}

EvalResult Evaluator::evaluate(const SampleGenerator& generator, std::uint64_t seed,
                               std::size_t epoch) const {
  Rng rng(seed, "metrics", epoch);
  EvalResult r;
  r.accuracy = classifier_accuracy(classifier_, generator, rng, config_.accuracy_samples).accuracy;
  // FID and IS share one batch of generated samples.
  const auto labels = draw_labels(config_.score_samples, classifier_.n_classes(), rng);
  const nn::Matrix images = generator.generate(labels, rng);
  r.fid = frechet_distance(summarize(classifier_.features(images)), reference_);
  r.inception_score =
      inception_score_from_posteriors(classifier_.posteriors(images), config_.score_splits);
  r.diversity = intra_class_diversity(classifier_, generator, rng, config_.diversity_per_class);
  return r;
}

}  // namespace qgl::metrics
