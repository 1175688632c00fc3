#include "qgl/stats/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qgl/core/errors.hpp"

namespace qgl::stats {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kAccuracy: return "accuracy";
    case Metric::kFid: return "fid";
    case Metric::kInceptionScore: return "is";
    case Metric::kDiversity: return "diversity";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics)
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown metric: " + std::string(name));
}

bool higher_is_better(Metric m) { return m != Metric::kFid; }

double EquivalenceThresholds::delta(Metric m) const {
  switch (m) {
    case Metric::kAccuracy: return delta_acc;
    case Metric::kFid: return delta_fid;
    case Metric::kInceptionScore: return delta_is;
    case Metric::kDiversity: return delta_diversity;
  }
  throw std::invalid_argument("unknown metric");
}

bool EquivalenceThresholds::is_preregistered() const {
  const EquivalenceThresholds d;
  return delta_acc == d.delta_acc && delta_fid == d.delta_fid && delta_is == d.delta_is &&
         delta_diversity == d.delta_diversity && cohens_d_cut == d.cohens_d_cut;
}

void EquivalenceThresholds::validate() const {
  for (double v : {delta_acc, delta_fid, delta_is, delta_diversity, cohens_d_cut})
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("equivalence thresholds must be positive and finite");
}

const std::vector<double>& VariantSample::at(Metric m) const {
  const auto it = values.find(m);
  if (it == values.end())
    throw std::invalid_argument("variant " + variant + " has no values for " +
                                std::string(to_string(m)));
  if (it->second.size() != seeds.size())
    throw ProtocolError("variant " + variant + ": " + std::string(to_string(m)) + " has " +
                        std::to_string(it->second.size()) + " values for " +
                        std::to_string(seeds.size()) + " seeds");
  return it->second;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kEquivalent: return "equivalent";
    case Verdict::kSuperiorA: return "superior_A";
    case Verdict::kSuperiorB: return "superior_B";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

ComparisonResult decide_equivalence(const VariantSample& a, const VariantSample& b, Metric metric,
                                    const EquivalenceThresholds& thresholds,
                                    std::size_t n_resamples, std::uint64_t bootstrap_seed) {
  thresholds.validate();
  if (a.seeds != b.seeds)
    throw ProtocolError("unpaired comparison: " + a.variant + " and " + b.variant +
                        " were run on different seed lists");
  const auto& x = a.at(metric);
  const auto& y = b.at(metric);

  ComparisonResult r;
  r.variant_a = a.variant;
  r.variant_b = b.variant;
  r.metric = metric;
  r.preregistered = thresholds.is_preregistered();
  r.mean_a = mean(x);
  r.mean_b = mean(y);
  r.t_test = paired_t_test(x, y);
  r.mean_difference = r.t_test.mean_difference;
  r.cohens_d = cohens_d_paired(x, y);
  r.ci_a = bootstrap_ci(x, n_resamples, 0.95, bootstrap_seed);
  r.ci_b = bootstrap_ci(y, n_resamples, 0.95, bootstrap_seed);
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
  r.ci_difference = bootstrap_ci(diff, n_resamples, 0.95, bootstrap_seed);

  const double delta = thresholds.delta(metric);
  const double cut = thresholds.cohens_d_cut;
  const bool small_effect = std::abs(r.cohens_d) < cut;
  if (small_effect && r.ci_a.overlaps(r.ci_b) && std::abs(r.mean_difference) <= delta) {
    r.verdict = Verdict::kEquivalent;
    return r;
  }
  const bool interval_above = r.ci_difference.lo > delta;
  const bool interval_below = r.ci_difference.hi < -delta;
  const bool practical_above = r.mean_difference > delta && !small_effect;
  const bool practical_below = r.mean_difference < -delta && !small_effect;
  const bool a_larger = interval_above || practical_above;
  const bool b_larger = interval_below || practical_below;
  if (a_larger == b_larger) {
    r.verdict = Verdict::kInconclusive;
  } else if (a_larger == higher_is_better(metric)) {
    r.verdict = Verdict::kSuperiorA;
  } else {
    r.verdict = Verdict::kSuperiorB;
  }
  return r;
}

AblationReport build_report(const std::vector<VariantSample>& samples,
                            const EquivalenceThresholds& thresholds, std::size_t n_resamples,
                            std::uint64_t bootstrap_seed) {
  thresholds.validate();
  std::map<std::string, const VariantSample*> by_name;
  for (const auto& s : samples) {
    if (std::find(kRequiredVariants.begin(), kRequiredVariants.end(), s.variant) ==
        kRequiredVariants.end())
      throw std::invalid_argument("unexpected variant in report: " + s.variant);
    if (!by_name.emplace(s.variant, &s).second)
      throw std::invalid_argument("duplicate variant in report: " + s.variant);
  }
  std::vector<std::string> missing;
  for (const auto& name : kRequiredVariants)
    if (!by_name.count(name)) missing.push_back(name);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw IncompleteCampaignError("campaign is missing variants: " + list);
  }

  AblationReport report;
  report.thresholds = thresholds;
  report.preregistered = thresholds.is_preregistered();
  const VariantSample& ref = *by_name.at(std::string(kReferenceVariant));
  report.seeds = ref.seeds;
  for (const auto& name : kRequiredVariants) {
    const VariantSample& s = *by_name.at(name);
    if (s.seeds != ref.seeds)
      throw ProtocolError("variant " + name + " does not share the reference seed list");
    VariantSummary sum;
    sum.variant = name;
    for (Metric m : kAllMetrics) {
      const auto& v = s.at(m);
      sum.mean[m] = mean(v);
      sum.sd[m] = v.size() >= 2 ? sample_sd(v) : 0.0;
    }
    report.summaries.push_back(std::move(sum));
  }

  std::vector<const VariantSample*> classical;
  for (const auto& name : kRequiredVariants)
    if (name != kReferenceVariant) classical.push_back(by_name.at(name));

  for (const VariantSample* c : classical) {
    for (Metric m : kAllMetrics) {
      auto r = decide_equivalence(*c, ref, m, thresholds, n_resamples, bootstrap_seed);
      if (std::find(kPreregisteredMetrics.begin(), kPreregisteredMetrics.end(), m) !=
          kPreregisteredMetrics.end()) {
        report.preregistered_comparisons.push_back(std::move(r));
      } else {
        r.exploratory = true;
        report.exploratory_comparisons.push_back(std::move(r));
      }
    }
  }
  for (std::size_t i = 0; i < classical.size(); ++i)
    for (std::size_t j = i + 1; j < classical.size(); ++j)
      for (Metric m : kAllMetrics) {
        auto r = decide_equivalence(*classical[i], *classical[j], m, thresholds, n_resamples,
                                    bootstrap_seed);
        r.exploratory = true;
        report.exploratory_comparisons.push_back(std::move(r));
      }
  return report;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json comparison_json(const ComparisonResult& r) {
  return {{"a", r.variant_a},
          {"b", r.variant_b},
          {"metric", to_string(r.metric)},
          {"mean_a", number(r.mean_a)},
          {"mean_b", number(r.mean_b)},
          {"mean_difference", number(r.mean_difference)},
          {"t", number(r.t_test.t)},
          {"p", number(r.t_test.p)},
          {"df", r.t_test.df},
          {"t_status", to_string(r.t_test.status)},
          {"cohens_d", number(r.cohens_d)},
          {"ci_a", {number(r.ci_a.lo), number(r.ci_a.hi)}},
          {"ci_b", {number(r.ci_b.lo), number(r.ci_b.hi)}},
          {"ci_difference", {number(r.ci_difference.lo), number(r.ci_difference.hi)}},
          {"verdict", to_string(r.verdict)},
          {"preregistered", r.preregistered},
          {"exploratory", r.exploratory}};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string AblationReport::to_json() const {
  nlohmann::json j;
  j["preregistered"] = preregistered;
  j["thresholds"] = {{"delta_acc", thresholds.delta_acc},
                     {"delta_fid", thresholds.delta_fid},
                     {"delta_is", thresholds.delta_is},
                     {"delta_diversity", thresholds.delta_diversity},
                     {"cohens_d_cut", thresholds.cohens_d_cut}};
  j["seeds"] = seeds;
  j["reference"] = kReferenceVariant;
  auto& vs = j["variants"] = nlohmann::json::array();
  for (const auto& s : summaries) {
    nlohmann::json e{{"variant", s.variant}};
    for (Metric m : kAllMetrics)
      e[std::string(to_string(m))] = {{"mean", number(s.mean.at(m))}, {"sd", number(s.sd.at(m))}};
    vs.push_back(std::move(e));
  }
  auto& pre = j["preregistered_comparisons"] = nlohmann::json::array();
  for (const auto& r : preregistered_comparisons) pre.push_back(comparison_json(r));
  auto& exp = j["exploratory_comparisons"] = nlohmann::json::array();
  for (const auto& r : exploratory_comparisons) exp.push_back(comparison_json(r));
  return j.dump(2) + "\n";
}

std::string AblationReport::to_text() const {
  std::ostringstream out;
  out << "thresholds: " << (preregistered ? "preregistered" : "NON-PREREGISTERED")
      << "  d_acc=" << thresholds.delta_acc << " d_fid=" << thresholds.delta_fid
      << " d_is=" << thresholds.delta_is << " d_div=" << thresholds.delta_diversity
      << " d_cut=" << thresholds.cohens_d_cut << "\n";
  out << "seeds:";
  for (auto s : seeds) out << ' ' << s;
  out << "\n\n";
  out << "variant    accuracy             fid                  is                   diversity\n";
  for (const auto& s : summaries) {
    std::string line = s.variant;
    line.resize(11, ' ');
    for (Metric m : kAllMetrics) {
      std::string cell = fmt("%.4f", s.mean.at(m)) + " +- " + fmt("%.4f", s.sd.at(m));
      cell.resize(21, ' ');
      line += cell;
    }
    out << line << "\n";
  }
  auto table = [&](const char* title, const std::vector<ComparisonResult>& rows) {
    out << "\n" << title << "\n";
    out << "a          b          metric     diff         d          p          verdict\n";
    for (const auto& r : rows) {
      std::string line = r.variant_a;
      line.resize(11, ' ');
      line += r.variant_b;
      line.resize(22, ' ');
      line += to_string(r.metric);
      line.resize(33, ' ');
      line += fmt("%+.5f", r.mean_difference);
      line.resize(46, ' ');
      line += fmt("%+.3f", r.cohens_d);
      line.resize(57, ' ');
      line += fmt("%.4f", r.t_test.p);
      line.resize(68, ' ');
      line += to_string(r.verdict);
      out << line << "\n";
    }
  };
  table("preregistered comparisons (classical vs vqe)", preregistered_comparisons);
  table("exploratory comparisons", exploratory_comparisons);
  return out.str();
}

std::string AblationReport::comparisons_csv() const {
  std::ostringstream out;
  out << "a,b,metric,mean_a,mean_b,mean_difference,t,p,cohens_d,ci_a_lo,ci_a_hi,ci_b_lo,ci_b_hi,"
         "ci_diff_lo,ci_diff_hi,verdict,preregistered,exploratory\n";
  auto row = [&](const ComparisonResult& r) {
    out << r.variant_a << ',' << r.variant_b << ',' << to_string(r.metric);
    for (double v : {r.mean_a, r.mean_b, r.mean_difference, r.t_test.t, r.t_test.p, r.cohens_d,
                     r.ci_a.lo, r.ci_a.hi, r.ci_b.lo, r.ci_b.hi, r.ci_difference.lo,
                     r.ci_difference.hi})
      out << ',' << fmt("%.17g", v);
    out << ',' << to_string(r.verdict) << ',' << (r.preregistered ? "true" : "false") << ','
        << (r.exploratory ? "true" : "false") << "\n";
  };
  for (const auto& r : preregistered_comparisons) row(r);
  for (const auto& r : exploratory_comparisons) row(r);
  return out.str();
}

}  // namespace qgl::stats
