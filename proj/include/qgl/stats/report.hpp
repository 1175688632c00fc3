#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qgl/stats/tests.hpp"

namespace qgl::stats {

enum class Metric { kAccuracy, kFid, kInceptionScore, kDiversity };

inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::kAccuracy, Metric::kFid,
                                                      Metric::kInceptionScore, Metric::kDiversity};

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);
bool higher_is_better(Metric m);

struct EquivalenceThresholds {
  double delta_acc = 0.03;
  double delta_fid = 5.0;
  double delta_is = 0.3;
  double delta_diversity = 0.05;
  double cohens_d_cut = 0.5;

  double delta(Metric m) const;
  bool is_preregistered() const;
  void validate() const;
};

/// Per-seed values of one variant, ordered like `seeds`.
struct VariantSample {
  std::string variant;
  std::vector<std::uint64_t> seeds;
  std::map<Metric, std::vector<double>> values;

  const std::vector<double>& at(Metric m) const;
};

enum class Verdict { kEquivalent, kSuperiorA, kSuperiorB, kInconclusive };

std::string_view to_string(Verdict v);

struct ComparisonResult {
  std::string variant_a;
  std::string variant_b;
  Metric metric = Metric::kAccuracy;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_difference = 0.0;  // a - b
  TTestResult t_test{};
  double cohens_d = 0.0;
  Interval ci_a{};
  Interval ci_b{};
  Interval ci_difference{};
  Verdict verdict = Verdict::kInconclusive;
  bool preregistered = true;
  bool exploratory = false;
};

/// Equivalent when |d| < cut, the per-variant mean CIs overlap and
/// |mean difference| <= delta. Otherwise superior to the better side when
/// the difference CI lies outside the delta band, or when the mean
/// difference exceeds delta with |d| >= cut; inconclusive otherwise.
ComparisonResult decide_equivalence(const VariantSample& a, const VariantSample& b, Metric metric,
                                    const EquivalenceThresholds& thresholds = {},
                                    std::size_t n_resamples = 10000,
                                    std::uint64_t bootstrap_seed = kDefaultBootstrapSeed);

struct VariantSummary {
  std::string variant;
  std::map<Metric, double> mean;
  std::map<Metric, double> sd;
};

inline constexpr std::string_view kReferenceVariant = "vqe";
inline const std::vector<std::string> kRequiredVariants = {"vqe", "mlp", "bias", "noise", "none"};
inline constexpr std::array<Metric, 3> kPreregisteredMetrics = {Metric::kAccuracy, Metric::kFid,
                                                                Metric::kInceptionScore};

struct AblationReport {
  EquivalenceThresholds thresholds{};
  bool preregistered = true;
  std::vector<std::uint64_t> seeds;
  std::vector<VariantSummary> summaries;
  std::vector<ComparisonResult> preregistered_comparisons;  // classical (A) vs reference (B)
  std::vector<ComparisonResult> exploratory_comparisons;

  std::string to_json() const;
  std::string to_text() const;
  /// Every comparison, one row each.
  std::string comparisons_csv() const;
};

/// Requires every name in kRequiredVariants; extra variants are rejected.
AblationReport build_report(const std::vector<VariantSample>& samples,
                            const EquivalenceThresholds& thresholds = {},
                            std::size_t n_resamples = 10000,
                            std::uint64_t bootstrap_seed = kDefaultBootstrapSeed);

}  // namespace qgl::stats
