#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace qgl::stats {

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> v);

/// Regularized incomplete beta I_x(a, b), evaluated by Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

enum class TTestStatus {
  kOk,
  kInfinite,    // zero-variance differences with nonzero mean: t = +-inf, p = 0
  kDegenerate,  // identical samples: t undefined, p = 1
};

std::string_view to_string(TTestStatus status);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
  double mean_difference = 0.0;
  double sd_difference = 0.0;
  TTestStatus status = TTestStatus::kOk;
};

/// Paired two-sided t test on d = x - y. Lengths must match and be >= 2.
TTestResult paired_t_test(std::span<const double> x, std::span<const double> y);

/// mean(d) / sd(d). Zero-variance differences follow the t-test convention:
/// 0 for identical samples, +-inf otherwise.
double cohens_d_paired(std::span<const double> x, std::span<const double> y);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  double width() const { return hi - lo; }
};

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

inline constexpr std::uint64_t kDefaultBootstrapSeed = 20240605;

/// Percentile interval of the bootstrap distribution of the mean. Resample
/// indices come from Rng(seed, "bootstrap") drawn row by row.
Interval bootstrap_ci(std::span<const double> values, std::size_t n_resamples = 10000,
                      double level = 0.95, std::uint64_t seed = kDefaultBootstrapSeed);

}  // namespace qgl::stats
