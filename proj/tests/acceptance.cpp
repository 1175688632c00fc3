// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <boost/math/distributions/students_t.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qgl/campaign/campaign.hpp"
#include "qgl/campaign/commands.hpp"
#include "qgl/core/io.hpp"
#include "qgl/core/rng.hpp"
#include "qgl/data/idx.hpp"
#include "qgl/energy/energy_source.hpp"
#include "qgl/gan/networks.hpp"
#include "qgl/gan/trainer.hpp"
#include "qgl/ising/ising.hpp"
#include "qgl/metrics/metrics.hpp"
#include "qgl/nn/ops.hpp"
#include "qgl/quantum/ansatz.hpp"
#include "qgl/stats/report.hpp"
#include "support.hpp"

using namespace qgl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------- 1, 2, 3

// Independent basis energy: -J sum_i s_i s_{i+1} - h sum_i s_i on a 4-site chain.
double chain_energy(std::size_t bits, double h) {
  double e = 0.0;
  auto s = [&](std::size_t i) { return ((bits >> i) & 1U) ? -1.0 : 1.0; };
  for (std::size_t i = 0; i + 1 < 4; ++i) e -= s(i) * s(i + 1);
  for (std::size_t i = 0; i < 4; ++i) e -= h * s(i);
  return e;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const ising::IsingSpec spec;
  double worst = 0.0;
  for (std::size_t c = 0; c < 10; ++c) {
    const double expected = -3.0 - 4.0 * (0.1 + 0.01 * static_cast<double>(c));
    double enumerated = 1e300;
    for (std::size_t b = 0; b < 16; ++b) enumerated = std::min(enumerated, chain_energy(b, 0.1 + 0.01 * c));
    const auto gs = quantum::ground_state_energy(ising::build_class_hamiltonian(spec, c));
    worst = std::max({worst, std::abs(gs.energy - expected), std::abs(gs.energy - enumerated),
                      std::abs(ising::closed_form_ground_energy(spec, c) - expected)});
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 1.0, fmt("max error %.3g, %.3f s", worst, t)};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const ising::IsingSpec spec;
  const auto circuit = quantum::build_ansatz(4, 1, quantum::Entanglement::kCircular);
  std::size_t violations = 0, draws = 0;
  double min_gap = 1e300;
  for (std::size_t c = 0; c < 10; ++c) {
    const auto h = ising::build_class_hamiltonian(spec, c);
    const double eg = ising::closed_form_ground_energy(spec, c);
    Rng rng(11, "variational_bound", c);
    std::vector<double> theta(circuit.parameter_count());
    for (int k = 0; k < 10000; ++k) {
      for (auto& x : theta) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const double e = quantum::circuit_energy(circuit, theta, h);
      min_gap = std::min(min_gap, e - eg);
      violations += e < eg - 1e-10;
      ++draws;
    }
  }
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << draws << " draws, " << violations << " violations, min gap " << min_gap << ", " << t << " s";
  return {violations == 0 && t < 30.0, d.str()};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  const ising::IsingSpec spec;
  const auto circuit = quantum::build_ansatz(4, 1, quantum::Entanglement::kCircular);
  const auto hams = ising::build_all_class_hamiltonians(spec);
  Rng rng(12, "parameter_shift");
  double worst = 0.0;
  const double h = 1e-5;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> theta(circuit.parameter_count());
    for (auto& x : theta) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const auto& ham = hams[rng.index(hams.size())];
    const auto grad = quantum::energy_gradient(circuit, theta, ham);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      auto up = theta, down = theta;
      up[i] += h;
      down[i] -= h;
      const double fd = (quantum::circuit_energy(circuit, up, ham) -
                         quantum::circuit_energy(circuit, down, ham)) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad[i]));
    }
  }
  const double t = seconds_since(t0);
  return {worst < 1e-6 && t < 30.0, fmt("max |shift - fd| %.3g, %.2f s", worst, t)};
}

// ---------------------------------------------------------------- 4

nn::Tensor random_constant(std::size_t r, std::size_t c, Rng& rng) {
  nn::Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return nn::Tensor::constant(m);
}

nn::Tensor random_parameter(std::size_t r, std::size_t c, Rng& rng) {
  return nn::Tensor::parameter(random_constant(r, c, rng).value());
}

Outcome criterion4() {
  using qgl::testing::gradient_error;
  Rng rng(4, "autodiff_audit");
  std::vector<std::pair<std::string, double>> errors;
  auto audit = [&](const std::string& name, const std::vector<nn::Tensor>& params,
                   const std::function<nn::Tensor()>& loss) {
    double worst = 0.0;
    for (const auto& p : params) worst = std::max(worst, gradient_error(p, loss));
    errors.emplace_back(name, worst);
  };
  auto tensors = [](const nn::ParameterList& list) {
    std::vector<nn::Tensor> out;
    for (const auto& p : list) out.push_back(p.tensor);
    return out;
  };
  const std::vector<int> labels = {0, 3, 7, 3, 9};
  const std::size_t batch = labels.size();

  {
    nn::Dense dense(6, 4, rng);
    auto x = random_parameter(batch, 6, rng);
    auto w = random_constant(batch, 4, rng);
    audit("dense", {x, dense.weight(), dense.bias()}, [&] { return nn::sum(nn::mul(dense(x), w)); });
  }
  {
    nn::Embedding emb(10, 5, rng);
    auto w = random_constant(batch, 5, rng);
    audit("embedding", {emb.table()}, [&] { return nn::sum(nn::mul(emb(labels), w)); });
  }
  {
    auto x = random_parameter(batch, 4, rng);
    auto w = random_constant(batch, 4, rng);
    audit("leaky_relu", {x}, [&] { return nn::sum(nn::mul(nn::leaky_relu(x, 0.2), w)); });
    audit("relu", {x}, [&] { return nn::sum(nn::mul(nn::relu(x), w)); });
    audit("tanh", {x}, [&] { return nn::sum(nn::mul(nn::tanh(x), w)); });
    audit("sigmoid", {x}, [&] { return nn::sum(nn::mul(nn::sigmoid(x), w)); });
    auto l1 = random_parameter(batch, 1, rng);
    audit("bce_with_logits", {l1}, [&] { return nn::bce_with_logits(l1, 0.9); });
    auto l10 = random_parameter(batch, 10, rng);
    audit("cross_entropy", {l10}, [&] { return nn::cross_entropy(l10, labels); });
  }
  gan::NetConfig small;
  small.latent_dim = 6;
  small.pixels = 9;
  small.g_hidden1 = 7;
  small.g_hidden2 = 8;
  small.d_hidden1 = 8;
  small.d_hidden2 = 7;
  {
    gan::GeneratorNet g(small, rng);
    auto z = random_parameter(batch, small.latent_dim, rng);
    auto w = random_constant(batch, small.pixels, rng);
    auto params = tensors(g.parameters());
    params.push_back(z);
    audit("generator", params, [&] { return nn::sum(nn::mul(g.forward(z, labels), w)); });
  }
  {
    gan::DiscriminatorNet d(small, rng);
    auto x = random_parameter(batch, small.pixels, rng);
    auto params = tensors(d.parameters());
    params.push_back(x);
    audit("discriminator", params, [&] {
      const auto out = d.forward(x);
      return nn::add(nn::bce_with_logits(out.source, 0.9), nn::cross_entropy(out.classes, labels));
    });
  }
  {
    metrics::FeatureClassifier clf(9, 10, rng, 6);
    auto x = random_parameter(batch, 9, rng);
    auto params = tensors(clf.parameters());
    params.push_back(x);
    audit("feature_classifier", params, [&] { return nn::cross_entropy(clf.forward(x), labels); });
  }
  energy::EnergyConfig ecfg;
  ecfg.latent_dim = 6;
  ecfg.hidden_units = 5;
  {
    energy::VqeEnergy vqe(ecfg, rng, std::nullopt);
    auto z = random_parameter(batch, 6, rng);
    auto params = tensors(vqe.parameters());
    params.push_back(z);
    audit("angle_producer+vqe_energy", params, [&] { return nn::sum(vqe.energy(z, labels)); });
    auto angles = random_parameter(batch, vqe.circuit_parameter_count(), rng);
    audit("vqe_energy", {angles}, [&] {
      return nn::sum(energy::vqe_energy(angles, labels, vqe.circuit(), vqe.hamiltonians()));
    });
  }
  {
    energy::MlpEnergy mlp(ecfg, rng, std::nullopt);
    auto z = random_parameter(batch, 6, rng);
    auto params = tensors(mlp.parameters());
    params.push_back(z);
    audit("mlp_energy", params, [&] { return nn::sum(mlp.energy(z, labels)); });
  }
  {
    auto z = random_constant(batch, 6, rng);
    auto src = energy::make_energy_source(energy::EnergySourceKind::kLearnedBias, ecfg, 3);
    audit("learned_bias", tensors(src->parameters()), [&] { return nn::sum(src->energy(z, labels)); });
  }

  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, e] : errors)
    if (e >= worst) worst = e, worst_name = name;
  std::ostringstream d;
  d << errors.size() << " layers, worst relative error " << worst << " (" << worst_name << ")";
  return {worst < 1e-4, d.str()};
}

// ---------------------------------------------------------------- 5

class ConstantGenerator : public metrics::SampleGenerator {
 public:
  nn::Matrix generate(std::span<const int> labels, Rng&) const override {
    return nn::Matrix::Constant(static_cast<Eigen::Index>(labels.size()), 9, 0.4);
  }
};

Outcome criterion5() {
  Rng rng(5, "metric_identities");
  const double eps = metrics::kFidCovarianceEpsilon;
  std::ostringstream d;
  bool ok = true;

  // Self-FID of a random full-rank summary.
  metrics::GaussianSummary s;
  const Eigen::MatrixXd a = random_constant(12, 12, rng).value();
  s.covariance = a * a.transpose() / 12.0;
  s.mean = random_constant(12, 1, rng).value();
  const double self = metrics::frechet_distance(s, s);
  ok = ok && std::abs(self) <= 1e-6;
  d << "self-FID " << self;

  // Commuting pairs: shared random eigenbasis, different spectra.
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const std::size_t n = 2 + k;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_constant(n, n, rng).value());
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd la(n), lb(n);
    for (std::size_t i = 0; i < n; ++i) la(i) = 0.1 + 3.0 * rng.uniform(), lb(i) = 0.1 + 3.0 * rng.uniform();
    if (k == 0) la(0) = 0.0;  // singular covariance
    metrics::GaussianSummary x, y;
    x.mean = random_constant(n, 1, rng).value();
    y.mean = random_constant(n, 1, rng).value();
    x.covariance = q * la.asDiagonal() * q.transpose();
    y.covariance = q * lb.asDiagonal() * q.transpose();
    double expected = (x.mean - y.mean).squaredNorm();
    for (std::size_t i = 0; i < n; ++i)
      expected += std::pow(std::sqrt(la(i) + eps) - std::sqrt(lb(i) + eps), 2);
    worst = std::max(worst, std::abs(metrics::frechet_distance(x, y) - expected));
  }
  ok = ok && worst <= 1e-8;
  d << ", commuting max error " << worst;

  const nn::Matrix uniform = nn::Matrix::Constant(1000, 10, 0.1);
  const double is = metrics::inception_score_from_posteriors(uniform, 10);
  ok = ok && is == 1.0;
  d << ", uniform IS " << std::setprecision(17) << is << std::setprecision(6);

  metrics::FeatureClassifier clf(9, 10, rng, 16);
  clf.freeze(1.0);
  const double div = metrics::intra_class_diversity(clf, ConstantGenerator(), rng, 20);
  ok = ok && div == 0.0;
  d << ", collapsed diversity " << div;
  return {ok, d.str()};
}

// ---------------------------------------------------------------- 6

using mp = boost::multiprecision::cpp_dec_float_50;

struct Reference {
  mp t, p, d;
  mp ci_lo, ci_hi;
};

mp mp_quantile(const std::vector<mp>& sorted, double q) {
  const mp h = mp(q) * mp(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(boost::multiprecision::floor(h).convert_to<double>());
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - mp(lo)) * (sorted[hi] - sorted[lo]);
}

Reference reference_stats(const std::vector<double>& x, const std::vector<double>& y,
                          std::size_t resamples, std::uint64_t seed) {
  const std::size_t n = x.size();
  std::vector<mp> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = mp(x[i]) - mp(y[i]);
  mp m = 0;
  for (const auto& v : d) m += v;
  m /= n;
  mp ss = 0;
  for (const auto& v : d) ss += (v - m) * (v - m);
  const mp sd = boost::multiprecision::sqrt(ss / (n - 1));
  Reference r;
  r.d = m / sd;
  r.t = m / (sd / boost::multiprecision::sqrt(mp(n)));
  boost::math::students_t_distribution<mp> dist(mp(n - 1));
  r.p = 2 * boost::math::cdf(boost::math::complement(dist, boost::multiprecision::abs(r.t)));

  // Same resampling indices as the library; arithmetic in 50 digits.
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - y[i];
  Rng rng(seed, "bootstrap");
  std::vector<mp> means(resamples);
  for (auto& mean : means) {
    mp s = 0;
    for (std::size_t i = 0; i < n; ++i) s += mp(diff[rng.index(n)]);
    mean = s / n;
  }
  std::sort(means.begin(), means.end());
  r.ci_lo = mp_quantile(means, 0.025);
  r.ci_hi = mp_quantile(means, 0.975);
  return r;
}

double rel_error(double value, const mp& ref) {
  const mp diff = boost::multiprecision::abs(mp(value) - ref);
  const mp scale = std::max(mp(1), mp(boost::multiprecision::abs(ref)));
  return (diff / scale).convert_to<double>();
}

// Five values with exactly mean mu and sample sd sigma, optionally with
// zero sample correlation against `orth` (itself mean 0).
std::vector<double> moment_matched(double mu, double sigma, Rng& rng, const std::vector<double>* orth) {
  std::vector<double> z(5);
  for (auto& v : z) v = rng.normal();
  double m = 0.0;
  for (double v : z) m += v;
  for (auto& v : z) v -= m / 5.0;
  if (orth != nullptr) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 5; ++i) num += z[i] * (*orth)[i], den += (*orth)[i] * (*orth)[i];
    for (std::size_t i = 0; i < 5; ++i) z[i] -= num / den * (*orth)[i];
  }
  const double sd = stats::sample_sd(z);
  std::vector<double> out(5);
  for (std::size_t i = 0; i < 5; ++i) out[i] = mu + sigma * z[i] / sd;
  return out;
}

Outcome criterion6() {
  const std::size_t resamples = 10000;
  const std::uint64_t seed = stats::kDefaultBootstrapSeed;
  Rng rng(6, "stats_fixtures");
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(k % 10);
    const double scale = std::pow(10.0, (k % 5) - 2);
    const double shift = 0.3 * rng.normal();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = scale * (5.0 + rng.normal());
      x[i] = y[i] + scale * (shift + 0.5 * rng.normal());
    }
    const auto ref = reference_stats(x, y, resamples, seed);
    const auto t = stats::paired_t_test(x, y);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - y[i];
    const auto ci = stats::bootstrap_ci(diff, resamples, 0.95, seed);
    worst = std::max({worst, rel_error(t.t, ref.t), rel_error(t.p, ref.p),
                      rel_error(stats::cohens_d_paired(x, y), ref.d), rel_error(ci.lo, ref.ci_lo),
                      rel_error(ci.hi, ref.ci_hi)});
  }
  const bool oracle_ok = worst <= 1e-6;

  // Table 2 summaries (mean, sd) for accuracy (fraction) and FID.
  struct Row {
    const char* name;
    double acc, acc_sd, fid, fid_sd;
  };
  const Row reference = {"vqe", 0.995, 0.005, 27.9, 8.0};
  const Row rows[] = {{"mlp", 0.991, 0.005, 21.33, 2.97},
                      {"bias", 0.990, 0.006, 18.43, 1.03},
                      {"noise", 0.992, 0.004, 20.77, 3.67},
                      {"none", 0.990, 0.004, 20.59, 2.72}};
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::size_t stream = 0;
  Rng r0(6, "table2", stream++);
  const auto ref_acc = moment_matched(reference.acc, reference.acc_sd, r0, nullptr);
  Rng r1(6, "table2", stream++);
  const auto ref_fid = moment_matched(reference.fid, reference.fid_sd, r1, nullptr);
  std::vector<double> ref_acc_c = ref_acc, ref_fid_c = ref_fid;
  for (auto& v : ref_acc_c) v -= reference.acc;
  for (auto& v : ref_fid_c) v -= reference.fid;
  const stats::VariantSample ref{"vqe", seeds, {{stats::Metric::kAccuracy, ref_acc}, {stats::Metric::kFid, ref_fid}}};

  bool acc_pattern = true, fid_pattern = true;
  std::ostringstream d;
  d << "oracle max rel error " << worst << "; Table-2 fixture:";
  for (const auto& row : rows) {
    Rng ra(6, "table2", stream++);
    Rng rf(6, "table2", stream++);
    const stats::VariantSample s{row.name, seeds,
                                 {{stats::Metric::kAccuracy, moment_matched(row.acc, row.acc_sd, ra, &ref_acc_c)},
                                  {stats::Metric::kFid, moment_matched(row.fid, row.fid_sd, rf, &ref_fid_c)}}};
    const auto acc = stats::decide_equivalence(s, ref, stats::Metric::kAccuracy);
    const auto fid = stats::decide_equivalence(s, ref, stats::Metric::kFid);
    acc_pattern = acc_pattern && acc.verdict == stats::Verdict::kEquivalent;
    fid_pattern = fid_pattern && fid.verdict == stats::Verdict::kSuperiorA;
    char buf[160];
    std::snprintf(buf, sizeof buf, " %s acc d=%+.3f %s, fid d=%+.3f %s;", row.name, acc.cohens_d,
                  std::string(stats::to_string(acc.verdict)).c_str(), fid.cohens_d,
                  std::string(stats::to_string(fid.verdict)).c_str());
    d << buf;
  }
  d << " accuracy pattern " << (acc_pattern ? "reproduced" : "NOT reproduced") << ", FID pattern "
    << (fid_pattern ? "reproduced" : "NOT reproduced");
  return {oracle_ok && acc_pattern && fid_pattern, d.str()};
}

// ---------------------------------------------------------------- 7

std::vector<std::vector<nn::Matrix>> gradient_trace(gan::TrainConfig c, const data::Dataset& real) {
  gan::AcganTrainer t(c);
  std::vector<std::size_t> rows(c.effective_batch());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  std::vector<std::vector<nn::Matrix>> trace;
  for (int step = 0; step < 3; ++step) {
    t.discriminator_step(real.gather(rows), real.gather_labels(rows));
    t.accumulate_generator_gradients();
    std::vector<nn::Matrix> grads;
    for (const auto& p : t.generator().parameters()) grads.push_back(p.tensor.grad());
    trace.push_back(std::move(grads));
    t.generator_optimizer().step();
  }
  return trace;
}

bool bit_identical(const std::vector<std::vector<nn::Matrix>>& a,
                   const std::vector<std::vector<nn::Matrix>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].size() != b[s].size()) return false;
    for (std::size_t i = 0; i < a[s].size(); ++i) {
      if (a[s][i].rows() != b[s][i].rows() || a[s][i].cols() != b[s][i].cols()) return false;
      if (std::memcmp(a[s][i].data(), b[s][i].data(), sizeof(double) * a[s][i].size()) != 0) return false;
    }
  }
  return true;
}

Outcome criterion7() {
  const auto real = data::synthetic_gmm(8, 10, 196, 3);
  gan::TrainConfig base;
  base.seed = 2025;
  base.energy_source = energy::EnergySourceKind::kNoRegularizer;
  const auto none = gradient_trace(base, real);
  auto vqe = base;
  vqe.energy_source = energy::EnergySourceKind::kVqe;
  vqe.lambda_energy = 0.0;
  auto noise = base;
  noise.energy_source = energy::EnergySourceKind::kRandomNoise;
  const bool a = bit_identical(gradient_trace(vqe, real), none);
  const bool b = bit_identical(gradient_trace(noise, real), none);
  return {a && b, std::string("lambda=0 vqe ") + (a ? "identical" : "DIFFERS") + ", random noise " +
                      (b ? "identical" : "DIFFERS") + " (3 steps, all generator tensors)"};
}

// ---------------------------------------------------------------- 8, 9

struct CampaignState {
  campaign::CampaignConfig config;
  bool ran = false;
  std::string error;
};

Outcome criterion8(CampaignState& st) {
  const fs::path root = fs::temp_directory_path() / "qgl-acceptance";
  fs::remove_all(root);
  auto& c = st.config;
  c.dataset = "synthetic";
  c.data_dir = root / "data";
  c.output_dir = root / "runs";
  c.workers = 4;
  c.train.epochs = 5;
  try {
    const auto t0 = Clock::now();
    std::ostringstream sink;
    if (campaign::cmd_prepare_data(c, sink) != 0 || campaign::cmd_train_classifier(c, sink) != 0)
      return {false, "data preparation failed: " + sink.str()};
    const auto ws = campaign::load_workspace(c);
    const auto outcome = campaign::run_campaign(c, ws, &std::cout);
    st.ran = true;
    const auto rep = campaign::build_campaign_report(c);
    const double t = seconds_since(t0);
    const stats::ComparisonResult* cmp = nullptr;
    for (const auto& r : rep.report.preregistered_comparisons)
      if (r.variant_a == "none" && r.variant_b == "vqe" && r.metric == stats::Metric::kAccuracy) cmp = &r;
    if (cmp == nullptr) return {false, "no vqe/none accuracy comparison in the report"};
    const bool eq = cmp->verdict == stats::Verdict::kEquivalent;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu runs (%zu failed), vqe %.4f vs none %.4f, diff %+.4f, d %+.3f, CIs %s, verdict %s, %.0f s",
                  outcome.planned, outcome.failed, cmp->mean_b, cmp->mean_a, cmp->mean_difference,
                  cmp->cohens_d, cmp->ci_a.overlaps(cmp->ci_b) ? "overlap" : "disjoint",
                  std::string(stats::to_string(cmp->verdict)).c_str(), t);
    return {eq && t <= 600.0 && outcome.valid, buf};
  } catch (const std::exception& e) {
    st.error = e.what();
    return {false, std::string("campaign error: ") + e.what()};
  }
}

Outcome criterion9(const CampaignState& st) {
  if (!st.ran) return {false, "campaign did not run: " + st.error};
  auto c = st.config;
  c.workers = 1;
  const auto ws = campaign::load_workspace(c);
  const std::string id = campaign::campaign_id(c);
  const fs::path runs = campaign::campaign_dir(c) / "runs";
  std::size_t identical = 0, checked = 0;
  for (const auto& [variant, seed] : std::vector<std::pair<std::string, std::uint64_t>>{
           {"vqe", 42}, {"mlp", 123}, {"none", 789}}) {
    const std::string rerun = campaign::run_csv(campaign::execute_run(c, ws, variant, seed));
    const std::string stored = read_file(runs / (campaign::run_stem(id, variant, seed) + ".csv"));
    identical += rerun == stored;
    ++checked;
  }
  return {identical == checked, std::to_string(identical) + "/" + std::to_string(checked) +
                                    " single-worker reruns byte-identical to the 4-worker campaign CSVs"};
}

// ---------------------------------------------------------------- 10

Outcome criterion10() {
  fs::path dir = QGL_MNIST_DIR;
  if (const char* env = std::getenv("QGL_MNIST_DIR")) dir = env;
  if (dir.empty() || !fs::exists(dir)) return {false, "canonical MNIST directory not found (set QGL_MNIST_DIR)"};
  std::ostringstream d;
  bool ok = true;
  std::vector<std::uint8_t> labels;
  try {
    const auto files = data::locate_mnist(dir);
    const struct {
      fs::path path;
      std::uint32_t magic;
      std::vector<std::uint32_t> dims;
    } expected[] = {{files.train_images, data::kIdxImageMagic, {60000, 28, 28}},
                    {files.train_labels, data::kIdxLabelMagic, {60000}},
                    {files.test_images, data::kIdxImageMagic, {10000, 28, 28}},
                    {files.test_labels, data::kIdxLabelMagic, {10000}}};
    for (const auto& e : expected) {
      const auto bytes = data::read_maybe_gzip(e.path);
      const auto t = data::parse_idx(bytes, e.magic);
      ok = ok && t.magic == e.magic && t.dims == e.dims;
      if (e.path == files.train_labels) labels = bytes;
    }
    d << "4 canonical files read with expected magic and dims";
  } catch (const std::exception& e) {
    return {false, std::string("canonical read failed: ") + e.what()};
  }
  // Mutate magic or dimension bytes of the real label file header.
  Rng rng(10, "idx_fuzz");
  std::size_t accepted = 0;
  for (int k = 0; k < 1000; ++k) {
    auto b = labels;
    const std::size_t pos = rng.index(8);
    std::uint8_t flip = 0;
    while (flip == 0) flip = static_cast<std::uint8_t>(rng.next_u64());
    b[pos] ^= flip;
    if (rng.uniform() < 0.5) b[rng.index(8)] ^= static_cast<std::uint8_t>(rng.next_u64());
    if (std::equal(b.begin(), b.begin() + 8, labels.begin())) b[pos] ^= flip;
    try {
      data::parse_idx(b, data::kIdxLabelMagic);
      ++accepted;
    } catch (const std::exception&) {
    }
  }
  ok = ok && accepted == 0;
  d << ", 1000 header mutations, " << accepted << " false accepts";
  return {ok, d.str()};
}

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);
  CampaignState campaign_state;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, criterion4},
      {5, criterion5},
      {6, criterion6},
      {7, criterion7},
      {8, [&] { return criterion8(campaign_state); }},
      {9, [&] { return criterion9(campaign_state); }},
      {10, criterion10},
  };
  std::vector<std::string> lines;
  int failures = 0;
  for (const auto& [n, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    const std::string line = "criterion " + std::to_string(n) + ": " + (o.pass ? "PASS" : "FAIL") + "  " + o.detail;
    std::cout << line << "\n";
    lines.push_back(line);
  }
  std::cout << "\nsummary\n";
  for (const auto& l : lines) std::cout << l.substr(0, l.find("  ")) << "\n";
  return failures == 0 ? 0 : 1;
}
