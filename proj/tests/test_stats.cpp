#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <limits>
#include <numeric>

#include "qgl/core/errors.hpp"
#include "qgl/stats/report.hpp"
#include "qgl/stats/tests.hpp"

using namespace qgl;
using namespace qgl::stats;

namespace {

double boost_two_sided(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

VariantSample sample(std::string name, std::map<Metric, std::vector<double>> values,
                     std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5}) {
  return {std::move(name), std::move(seeds), std::move(values)};
}

VariantSample full(std::string name, double offset) {
  std::map<Metric, std::vector<double>> v;
  const std::vector<double> jitter = {0.0, 0.1, -0.1, 0.2, -0.2};
  for (auto m : kAllMetrics) {
    std::vector<double> xs;
    for (double j : jitter) xs.push_back(1.0 + offset + 0.01 * j);
    v[m] = xs;
  }
  return sample(std::move(name), v);
}

}  // namespace

TEST_CASE("incomplete beta against Boost") {
  for (double a : {0.5, 1.0, 2.5, 7.0, 30.0})
    for (double b : {0.5, 1.0, 3.0, 12.0})
      for (double x : {0.0, 1e-6, 0.1, 0.35, 0.5, 0.8, 0.999, 1.0}) {
        const double ref = boost::math::ibeta(a, b, x);
        CHECK(regularized_incomplete_beta(a, b, x) == doctest::Approx(ref).epsilon(1e-11).scale(1e-300));
      }
  CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("two-sided Student t p-values against Boost") {
  for (double df : {1.0, 2.0, 3.0, 4.0, 9.0, 29.0, 120.0})
    for (double t : {0.0, 0.05, 0.7, 1.5, 2.776, 5.0, 12.0, -3.0}) {
      const double ref = boost_two_sided(t, df);
      CHECK(student_t_two_sided_p(t, df) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("paired t test on a hand-checked example") {
  const std::vector<double> x = {1.0, -1.0, 2.0, -2.0, 0.5};
  const std::vector<double> y(5, 0.0);
  const auto r = paired_t_test(x, y);
  const double sd = std::sqrt(2.55);
  const double t = 0.1 / (sd / std::sqrt(5.0));
  CHECK(r.status == TTestStatus::kOk);
  CHECK(r.df == 4.0);
  CHECK(r.mean_difference == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(r.sd_difference == doctest::Approx(sd).epsilon(1e-14));
  CHECK(r.t == doctest::Approx(t).epsilon(1e-13));
  CHECK(r.p == doctest::Approx(boost_two_sided(t, 4.0)).epsilon(1e-10));
  CHECK(cohens_d_paired(x, y) == doctest::Approx(0.1 / sd).epsilon(1e-13));
  CHECK(cohens_d_paired(y, x) == doctest::Approx(-0.1 / sd).epsilon(1e-13));
}

TEST_CASE("degenerate t test conventions") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  const auto same = paired_t_test(x, x);
  CHECK(same.status == TTestStatus::kDegenerate);
  CHECK(same.p == 1.0);
  CHECK(cohens_d_paired(x, x) == 0.0);
  CHECK(to_string(same.status) == "degenerate: identical samples");

  const std::vector<double> shifted = {2.0, 3.0, 4.0};
  const auto inf = paired_t_test(shifted, x);
  CHECK(inf.status == TTestStatus::kInfinite);
  CHECK(inf.p == 0.0);
  CHECK(inf.t == std::numeric_limits<double>::infinity());
  CHECK(cohens_d_paired(x, shifted) == -std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(paired_t_test(x, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{1.0}, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> s = {1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_sorted(s, 0.0) == 1.0);
  CHECK(quantile_sorted(s, 1.0) == 4.0);
  CHECK(quantile_sorted(s, 0.5) == 2.5);
  CHECK(quantile_sorted(s, 0.25) == doctest::Approx(1.75));
  CHECK_THROWS_AS(quantile_sorted(s, 1.5), std::invalid_argument);
}

TEST_CASE("bootstrap interval properties") {
  const std::vector<double> c(6, 2.5);
  const auto flat = bootstrap_ci(c, 500);
  CHECK(flat.lo == 2.5);
  CHECK(flat.hi == 2.5);

  const std::vector<double> v = {0.3, 1.9, -0.4, 2.2, 0.8, 1.1, 0.0};
  const double m = mean(v);
  const auto i50 = bootstrap_ci(v, 4000, 0.5);
  const auto i90 = bootstrap_ci(v, 4000, 0.9);
  const auto i99 = bootstrap_ci(v, 4000, 0.99);
  CHECK(i90.contains(m));
  CHECK(i50.width() <= i90.width());
  CHECK(i90.width() <= i99.width());
  CHECK(i99.lo >= *std::min_element(v.begin(), v.end()));
  CHECK(i99.hi <= *std::max_element(v.begin(), v.end()));
  const auto again = bootstrap_ci(v, 4000, 0.9);
  CHECK(again.lo == i90.lo);
  CHECK(again.hi == i90.hi);
  const auto other = bootstrap_ci(v, 4000, 0.9, 7);
  CHECK((other.lo != i90.lo || other.hi != i90.hi));
}

TEST_CASE("a clear FID gap favors the lower side") {
  const auto a = sample("a", {{Metric::kFid, {18, 19, 18, 19, 18}}});
  const auto b = sample("b", {{Metric::kFid, {28, 29, 27, 30, 28}}});
  const auto r = decide_equivalence(a, b, Metric::kFid);
  CHECK(r.verdict == Verdict::kSuperiorA);
  CHECK(r.mean_difference == doctest::Approx(-10.0));
  CHECK(r.cohens_d < -0.5);
  CHECK(r.ci_difference.hi < -5.0);
  CHECK(decide_equivalence(b, a, Metric::kFid).verdict == Verdict::kSuperiorB);
}

TEST_CASE("a small accuracy difference with a small effect is equivalent") {
  const std::vector<double> base = {0.970, 0.975, 0.965, 0.970, 0.972};
  const std::vector<double> z = {1.0, -1.0, 2.0, -2.0, 0.0};
  const double zsd = std::sqrt(2.5);
  std::vector<double> shifted;
  for (std::size_t i = 0; i < 5; ++i) shifted.push_back(base[i] + 0.005 + 0.025 * z[i] / zsd);
  const auto a = sample("a", {{Metric::kAccuracy, shifted}});
  const auto b = sample("b", {{Metric::kAccuracy, base}});
  const auto r = decide_equivalence(a, b, Metric::kAccuracy);
  CHECK(r.cohens_d == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(r.ci_a.overlaps(r.ci_b));
  CHECK(r.verdict == Verdict::kEquivalent);
}

TEST_CASE("decisions are antisymmetric and scale equivariant") {
  const std::vector<std::vector<double>> as = {{1.0, 1.4, 0.9, 1.2, 1.1}, {3.0, 3.2, 2.9, 3.1, 3.05},
                                               {0.2, 0.9, -0.3, 0.4, 0.1}};
  const std::vector<double> b = {1.0, 1.1, 1.0, 1.05, 0.95};
  for (const auto& av : as) {
    const auto a = sample("a", {{Metric::kInceptionScore, av}});
    const auto bb = sample("b", {{Metric::kInceptionScore, b}});
    const auto ab = decide_equivalence(a, bb, Metric::kInceptionScore);
    const auto ba = decide_equivalence(bb, a, Metric::kInceptionScore);
    CHECK(ab.cohens_d == doctest::Approx(-ba.cohens_d));
    const auto flipped = ab.verdict == Verdict::kSuperiorA   ? Verdict::kSuperiorB
                         : ab.verdict == Verdict::kSuperiorB ? Verdict::kSuperiorA
                                                             : ab.verdict;
    CHECK(ba.verdict == flipped);

    EquivalenceThresholds scaled;
    scaled.delta_is *= 10.0;
    std::vector<double> a10, b10;
    for (double x : av) a10.push_back(10.0 * x);
    for (double x : b) b10.push_back(10.0 * x);
    const auto s = decide_equivalence(sample("a", {{Metric::kInceptionScore, a10}}),
                                      sample("b", {{Metric::kInceptionScore, b10}}),
                                      Metric::kInceptionScore, scaled);
    CHECK(s.verdict == ab.verdict);
    CHECK(s.cohens_d == doctest::Approx(ab.cohens_d));
  }
}

TEST_CASE("protocol errors") {
  const auto a = sample("a", {{Metric::kFid, {1, 2, 3, 4, 5}}});
  const auto b = sample("b", {{Metric::kFid, {1, 2, 3, 4, 5}}}, {1, 2, 3, 4, 6});
  CHECK_THROWS_AS(decide_equivalence(a, b, Metric::kFid), ProtocolError);
  const auto short_b = sample("b", {{Metric::kFid, {1, 2, 3}}});
  CHECK_THROWS_AS(decide_equivalence(a, short_b, Metric::kFid), ProtocolError);
  EquivalenceThresholds bad;
  bad.delta_fid = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(parse_metric("is") == Metric::kInceptionScore);
  CHECK_THROWS_AS(parse_metric("nope"), std::invalid_argument);
}

TEST_CASE("report structure") {
  std::vector<VariantSample> all = {full("vqe", 0.0), full("mlp", 0.001), full("bias", 0.002),
                                    full("noise", 0.0), full("none", -0.001)};
  const auto rep = build_report(all, {}, 500);
  CHECK(rep.preregistered);
  CHECK(rep.preregistered_comparisons.size() == 12);
  for (const auto& c : rep.preregistered_comparisons) {
    CHECK(c.variant_b == "vqe");
    CHECK_FALSE(c.exploratory);
    CHECK(c.metric != Metric::kDiversity);
  }
  CHECK(rep.exploratory_comparisons.size() == 4 + 6 * 4);
  CHECK(rep.to_text().find("NON-PREREGISTERED") == std::string::npos);
  CHECK(rep.to_json().find("\"preregistered\"") != std::string::npos);

  EquivalenceThresholds loose;
  loose.delta_fid = 50.0;
  const auto rep2 = build_report(all, loose, 500);
  CHECK_FALSE(rep2.preregistered);
  CHECK(rep2.to_text().find("NON-PREREGISTERED") != std::string::npos);

  auto missing = all;
  missing.pop_back();
  CHECK_THROWS_AS(build_report(missing), IncompleteCampaignError);
  auto extra = all;
  extra.push_back(full("other", 0.0));
  CHECK_THROWS_AS(build_report(extra), std::invalid_argument);
  auto dup = missing;
  dup.push_back(full("mlp", 0.0));
  CHECK_THROWS(build_report(dup));
}
