#include "qgl/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qgl/core/rng.hpp"

namespace qgl::stats {

double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("sample_sd: need at least two values");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fastest on the side x < (a + 1) / (a + b + 2).
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_two_sided_p: df must be positive");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

std::string_view to_string(TTestStatus status) {
  switch (status) {
    case TTestStatus::kOk: return "ok";
    case TTestStatus::kInfinite: return "infinite: zero-variance differences";
    case TTestStatus::kDegenerate: return "degenerate: identical samples";
  }
  return "unknown";
}

namespace {
std::vector<double> differences(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("paired test: samples differ in length");
  if (x.size() < 2) throw std::invalid_argument("paired test: need at least two pairs");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return d;
}
}  // namespace

TTestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
  const auto d = differences(x, y);
  TTestResult r;
  r.df = static_cast<double>(d.size() - 1);
  r.mean_difference = mean(d);
  r.sd_difference = sample_sd(d);
  if (r.sd_difference == 0.0) {
    if (r.mean_difference == 0.0) {
      r.status = TTestStatus::kDegenerate;
      r.t = std::numeric_limits<double>::quiet_NaN();
      r.p = 1.0;
    } else {
      r.status = TTestStatus::kInfinite;
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
      r.p = 0.0;
    }
    return r;
  }
  r.t = r.mean_difference / (r.sd_difference / std::sqrt(static_cast<double>(d.size())));
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

double cohens_d_paired(std::span<const double> x, std::span<const double> y) {
  const auto d = differences(x, y);
  const double m = mean(d);
  const double s = sample_sd(d);
  if (s == 0.0) return m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m);
  return m / s;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval bootstrap_ci(std::span<const double> values, std::size_t n_resamples, double level,
                      std::uint64_t seed) {
  if (values.size() < 2) throw std::invalid_argument("bootstrap_ci: need at least two values");
  if (n_resamples == 0) throw std::invalid_argument("bootstrap_ci: need at least one resample");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap_ci: level in (0, 1)");
  Rng rng(seed, "bootstrap");
  const std::size_t n = values.size();
  std::vector<double> means(n_resamples);
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[rng.index(n)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = 0.5 * (1.0 - level);
  return {quantile_sorted(means, tail), quantile_sorted(means, 1.0 - tail)};
}

}  // namespace qgl::stats
