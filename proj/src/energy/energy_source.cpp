#include "qgl/energy/energy_source.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

#include "qgl/nn/ops.hpp"

namespace qgl::energy {

std::string_view to_string(EnergySourceKind kind) {
  switch (kind) {
    case EnergySourceKind::kVqe: return "vqe";
    case EnergySourceKind::kMlpEnergy: return "mlp";
    case EnergySourceKind::kLearnedBias: return "bias";
    case EnergySourceKind::kRandomNoise: return "noise";
    case EnergySourceKind::kNoRegularizer: return "none";
  }
  return "unknown";
}

EnergySourceKind parse_kind(std::string_view name) {
  for (auto k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown energy source '" + std::string(name) +
                              "' (expected vqe, mlp, bias, noise or none)");
}

void EnergySource::check_labels(std::span<const int> labels) const {
  for (int c : labels) {
    if (c < 0 || static_cast<std::size_t>(c) >= n_classes_) {
      throw std::invalid_argument("energy: class " + std::to_string(c) + " outside [0, " +
                                  std::to_string(n_classes_) + ")");
    }
  }
}

namespace {

nn::Tensor embedding_or_new(std::optional<nn::Tensor> shared, std::size_t n_classes,
                            std::size_t dim, Rng& rng) {
  if (shared) {
    if (shared->rows() != n_classes || shared->cols() != dim) {
      throw std::invalid_argument("shared embedding table has the wrong shape");
    }
    return *shared;
  }
  return nn::Embedding(n_classes, dim, rng).table();
}

}  // namespace

AngleProducer::AngleProducer(const EnergyConfig& config, std::size_t parameter_count, Rng& rng,
                             std::optional<nn::Tensor> shared_embedding)
    : owns_embedding_(!shared_embedding.has_value()) {
  embedding_ = embedding_or_new(std::move(shared_embedding), config.ising.n_classes,
                                config.latent_dim, rng);
  hidden_ = nn::Dense(config.latent_dim, config.hidden_units, rng);
  output_ = nn::Dense(config.hidden_units, parameter_count, rng);
}

nn::Tensor AngleProducer::operator()(const nn::Tensor& z, std::span<const int> labels) const {
  nn::Tensor conditioned = nn::mul(z, nn::embedding_lookup(embedding_, labels));
  nn::Tensor h = nn::relu(hidden_(conditioned));
  return nn::scale(nn::tanh(output_(h)), std::numbers::pi);
}

nn::ParameterList AngleProducer::parameters() const {
  nn::ParameterList out;
  if (owns_embedding_) out.push_back({"embedding", embedding_});
  nn::append(out, "hidden", hidden_.parameters());
  nn::append(out, "output", output_.parameters());
  return out;
}

nn::Tensor vqe_energy(const nn::Tensor& angles, std::span<const int> labels,
                      const quantum::AnsatzCircuit& circuit,
                      std::span<const quantum::Hamiltonian> hamiltonians) {
  const std::size_t batch = angles.rows();
  if (labels.size() != batch) throw std::invalid_argument("vqe_energy: label count mismatch");
  if (angles.cols() != circuit.parameter_count()) {
    throw std::invalid_argument("vqe_energy: angle width differs from circuit parameter count");
  }
  const nn::Matrix& theta = angles.value();
  nn::Matrix out(batch, 1);
  for (std::size_t r = 0; r < batch; ++r) {
    std::span<const double> row(theta.data() + r * theta.cols(), theta.cols());
    out(static_cast<Eigen::Index>(r), 0) = quantum::circuit_energy(circuit, row, hamiltonians[labels[r]]);
  }
  std::vector<int> idx(labels.begin(), labels.end());
  return nn::make_result(
      std::move(out), "vqe_energy", {angles},
      [idx, &circuit, hamiltonians](nn::Node& self) {
        nn::Node& p = *self.parents[0];
        nn::Matrix g(p.value.rows(), p.value.cols());
        for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
          std::span<const double> row(p.value.data() + r * p.value.cols(),
                                      static_cast<std::size_t>(p.value.cols()));
          const auto d = quantum::energy_gradient(circuit, row, hamiltonians[idx[r]]);
          for (std::size_t k = 0; k < d.size(); ++k) {
            g(r, static_cast<Eigen::Index>(k)) = self.grad(r, 0) * d[k];
          }
        }
        p.accumulate(g);
      });
}

VqeEnergy::VqeEnergy(const EnergyConfig& config, Rng& rng,
                     std::optional<nn::Tensor> shared_embedding)
    : EnergySource(config.ising.n_classes),
      circuit_(quantum::build_ansatz(config.ising.n_qubits, config.ansatz_repetitions,
                                     config.entanglement)),
      hamiltonians_(ising::build_all_class_hamiltonians(config.ising)),
      producer_(config, circuit_.parameter_count(), rng, std::move(shared_embedding)) {}

nn::Tensor VqeEnergy::energy(const nn::Tensor& z, std::span<const int> labels) const {
  check_labels(labels);
  return vqe_energy(producer_(z, labels), labels, circuit_, hamiltonians_);
}

MlpEnergy::MlpEnergy(const EnergyConfig& config, Rng& rng,
                     std::optional<nn::Tensor> shared_embedding)
    : EnergySource(config.ising.n_classes), owns_embedding_(!shared_embedding.has_value()) {
  embedding_ = embedding_or_new(std::move(shared_embedding), config.ising.n_classes,
                                config.latent_dim, rng);
  l1_ = nn::Dense(config.latent_dim, config.hidden_units, rng);
  l2_ = nn::Dense(config.hidden_units, config.hidden_units, rng);
  l3_ = nn::Dense(config.hidden_units, 1, rng);
}

nn::Tensor MlpEnergy::energy(const nn::Tensor& z, std::span<const int> labels) const {
  check_labels(labels);
  nn::Tensor x = nn::mul(z, nn::embedding_lookup(embedding_, labels));
  return l3_(nn::relu(l2_(nn::relu(l1_(x)))));
}

nn::ParameterList MlpEnergy::parameters() const {
  nn::ParameterList out;
  if (owns_embedding_) out.push_back({"embedding", embedding_});
  nn::append(out, "l1", l1_.parameters());
  nn::append(out, "l2", l2_.parameters());
  nn::append(out, "l3", l3_.parameters());
  return out;
}

LearnedBias::LearnedBias(const EnergyConfig& config)
    : EnergySource(config.ising.n_classes),
      table_(nn::Tensor::parameter(
          nn::Matrix::Constant(config.ising.n_classes, 1, config.learned_bias_init))) {}

nn::Tensor LearnedBias::energy(const nn::Tensor& z, std::span<const int> labels) const {
  check_labels(labels);
  if (z.rows() != labels.size()) throw std::invalid_argument("energy: batch size mismatch");
  return nn::embedding_lookup(table_, labels);
}

RandomNoise::RandomNoise(const EnergyConfig& config, Rng& rng)
    : EnergySource(config.ising.n_classes) {
  values_.reserve(config.ising.n_classes);
  for (std::size_t c = 0; c < config.ising.n_classes; ++c) {
    values_.push_back(rng.uniform(config.noise_low, config.noise_high));
  }
}

nn::Tensor RandomNoise::energy(const nn::Tensor& z, std::span<const int> labels) const {
  check_labels(labels);
  if (z.rows() != labels.size()) throw std::invalid_argument("energy: batch size mismatch");
  nn::Matrix out(labels.size(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) out(static_cast<Eigen::Index>(i), 0) = values_[labels[i]];
  return nn::Tensor::constant(std::move(out));
}

nn::Tensor NoRegularizer::energy(const nn::Tensor& z, std::span<const int> labels) const {
  check_labels(labels);
  if (z.rows() != labels.size()) throw std::invalid_argument("energy: batch size mismatch");
  return nn::Tensor::constant(nn::Matrix::Zero(labels.size(), 1));
}

std::unique_ptr<EnergySource> make_energy_source(EnergySourceKind kind, const EnergyConfig& config,
                                                 std::uint64_t seed,
                                                 std::optional<nn::Tensor> shared_embedding) {
  Rng init(seed, "energy");
  switch (kind) {
    case EnergySourceKind::kVqe:
      return std::make_unique<VqeEnergy>(config, init, std::move(shared_embedding));
    case EnergySourceKind::kMlpEnergy:
      return std::make_unique<MlpEnergy>(config, init, std::move(shared_embedding));
    case EnergySourceKind::kLearnedBias: return std::make_unique<LearnedBias>(config);
    case EnergySourceKind::kRandomNoise: {
      Rng noise(seed, "rnoise");
      return std::make_unique<RandomNoise>(config, noise);
    }
    case EnergySourceKind::kNoRegularizer:
      return std::make_unique<NoRegularizer>(config.ising.n_classes);
  }
  throw std::invalid_argument("make_energy_source: unknown kind");
}

double energy_value(const EnergySource& source, std::span<const double> z, int class_label) {
  nn::Matrix row(1, static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) row(0, static_cast<Eigen::Index>(i)) = z[i];
  const int labels[1] = {class_label};
  return source.energy(nn::Tensor::constant(std::move(row)), labels).item();
}

}  // namespace qgl::energy
