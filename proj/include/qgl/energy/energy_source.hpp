#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qgl/core/rng.hpp"
#include "qgl/ising/ising.hpp"
#include "qgl/nn/layers.hpp"
#include "qgl/quantum/ansatz.hpp"

namespace qgl::energy {

enum class EnergySourceKind { kVqe, kMlpEnergy, kLearnedBias, kRandomNoise, kNoRegularizer };

inline constexpr std::array<EnergySourceKind, 5> kAllKinds = {
    EnergySourceKind::kVqe, EnergySourceKind::kMlpEnergy, EnergySourceKind::kLearnedBias,
    EnergySourceKind::kRandomNoise, EnergySourceKind::kNoRegularizer};

/// Config-file spelling: vqe, mlp, bias, noise, none.
std::string_view to_string(EnergySourceKind kind);
EnergySourceKind parse_kind(std::string_view name);

struct EnergyConfig {
  std::size_t latent_dim = 64;
  std::size_t hidden_units = 64;
  ising::IsingSpec ising{};
  std::size_t ansatz_repetitions = 1;
  quantum::Entanglement entanglement = quantum::Entanglement::kCircular;
  double learned_bias_init = 0.15;
  double noise_low = 0.1;
  double noise_high = 0.2;
};

/// A per-sample scalar signal added to the generator objective.
class EnergySource {
 public:
  virtual ~EnergySource() = default;

  virtual EnergySourceKind kind() const = 0;
  /// Energies for a batch of latent rows, shape batch x 1.
  virtual nn::Tensor energy(const nn::Tensor& z, std::span<const int> labels) const = 0;
  /// Trainable parameters owned by this source. A class-embedding table
  /// borrowed from the generator is not included.
  virtual nn::ParameterList parameters() const = 0;

  std::size_t parameter_count() const { return nn::count_values(parameters()); }
  std::size_t n_classes() const { return n_classes_; }

 protected:
  explicit EnergySource(std::size_t n_classes) : n_classes_(n_classes) {}
  void check_labels(std::span<const int> labels) const;

 private:
  std::size_t n_classes_;
};

/// theta(z, c) = pi * tanh(W2 relu(W1 (z * emb(c)) + b1) + b2).
class AngleProducer {
 public:
  AngleProducer(const EnergyConfig& config, std::size_t parameter_count, Rng& rng,
                std::optional<nn::Tensor> shared_embedding);

  nn::Tensor operator()(const nn::Tensor& z, std::span<const int> labels) const;
  nn::ParameterList parameters() const;

  nn::Dense& hidden() { return hidden_; }
  nn::Dense& output() { return output_; }
  const nn::Tensor& embedding_table() const { return embedding_; }

 private:
  nn::Tensor embedding_;
  bool owns_embedding_;
  nn::Dense hidden_;
  nn::Dense output_;
};

/// Energy of the class Hamiltonian in the ansatz state prepared from
/// each angle row. Backward uses the parameter-shift gradient.
nn::Tensor vqe_energy(const nn::Tensor& angles, std::span<const int> labels,
                      const quantum::AnsatzCircuit& circuit,
                      std::span<const quantum::Hamiltonian> hamiltonians);

class VqeEnergy final : public EnergySource {
 public:
  VqeEnergy(const EnergyConfig& config, Rng& rng, std::optional<nn::Tensor> shared_embedding);

  EnergySourceKind kind() const override { return EnergySourceKind::kVqe; }
  nn::Tensor energy(const nn::Tensor& z, std::span<const int> labels) const override;
  nn::ParameterList parameters() const override { return producer_.parameters(); }

  const quantum::AnsatzCircuit& circuit() const { return circuit_; }
  const std::vector<quantum::Hamiltonian>& hamiltonians() const { return hamiltonians_; }
  AngleProducer& producer() { return producer_; }
  std::size_t circuit_parameter_count() const { return circuit_.parameter_count(); }

 private:
  quantum::AnsatzCircuit circuit_;
  std::vector<quantum::Hamiltonian> hamiltonians_;
  AngleProducer producer_;
};

/// Three dense layers (latent -> hidden -> hidden -> 1) with ReLU.
class MlpEnergy final : public EnergySource {
 public:
  MlpEnergy(const EnergyConfig& config, Rng& rng, std::optional<nn::Tensor> shared_embedding);

  EnergySourceKind kind() const override { return EnergySourceKind::kMlpEnergy; }
  nn::Tensor energy(const nn::Tensor& z, std::span<const int> labels) const override;
  nn::ParameterList parameters() const override;

 private:
  nn::Tensor embedding_;
  bool owns_embedding_;
  nn::Dense l1_, l2_, l3_;
};

/// Trainable per-class scalar b_c.
class LearnedBias final : public EnergySource {
 public:
  explicit LearnedBias(const EnergyConfig& config);

  EnergySourceKind kind() const override { return EnergySourceKind::kLearnedBias; }
  nn::Tensor energy(const nn::Tensor& z, std::span<const int> labels) const override;
  nn::ParameterList parameters() const override { return {{"bias", table_}}; }
  const nn::Tensor& table() const { return table_; }

 private:
  nn::Tensor table_;
};

/// Frozen per-class r_c ~ U(noise_low, noise_high), drawn once.
class RandomNoise final : public EnergySource {
 public:
  RandomNoise(const EnergyConfig& config, Rng& rng);

  EnergySourceKind kind() const override { return EnergySourceKind::kRandomNoise; }
  nn::Tensor energy(const nn::Tensor& z, std::span<const int> labels) const override;
  nn::ParameterList parameters() const override { return {}; }
  const std::vector<double>& table() const { return values_; }

 private:
  std::vector<double> values_;
};

class NoRegularizer final : public EnergySource {
 public:
  explicit NoRegularizer(std::size_t n_classes) : EnergySource(n_classes) {}

  EnergySourceKind kind() const override { return EnergySourceKind::kNoRegularizer; }
  nn::Tensor energy(const nn::Tensor& z, std::span<const int> labels) const override;
  nn::ParameterList parameters() const override { return {}; }
};

/// Builds a source. Trainable weights draw from Rng(seed, "energy"); the
/// random-noise table from Rng(seed, "rnoise"). When `shared_embedding` is
/// given, the VQE and MLP variants read z * emb(c) through that table.
std::unique_ptr<EnergySource> make_energy_source(EnergySourceKind kind, const EnergyConfig& config,
                                                 std::uint64_t seed,
                                                 std::optional<nn::Tensor> shared_embedding = {});

/// Single-sample convenience: the scalar energy of (z, c).
double energy_value(const EnergySource& source, std::span<const double> z, int class_label);

}  // namespace qgl::energy
