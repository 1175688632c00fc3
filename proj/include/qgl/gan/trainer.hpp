#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgl/data/dataset.hpp"
#include "qgl/energy/energy_source.hpp"
#include "qgl/gan/networks.hpp"
#include "qgl/metrics/metrics.hpp"
#include "qgl/nn/adam.hpp"

namespace qgl::gan {

struct TrainConfig {
  std::size_t epochs = 5;
  std::size_t micro_batch = 32;
  std::size_t accumulation_steps = 2;
  double lambda_energy = 0.1;
  double real_label_smoothing = 0.9;
  std::uint64_t seed = 42;
  energy::EnergySourceKind energy_source = energy::EnergySourceKind::kVqe;
  /// Include the fake-sample class loss in the discriminator objective.
  bool fake_class_loss = false;
  /// Energy sources read z * emb(c) through the generator's embedding table.
  bool share_embedding = true;
  nn::AdamConfig adam{};
  NetConfig net{};
  energy::EnergyConfig energy{};
  metrics::EvalConfig eval{};
  /// 0 means every full effective batch of the epoch.
  std::size_t max_batches_per_epoch = 0;

  std::size_t effective_batch() const { return micro_batch * accumulation_steps; }
  void validate() const;
};

struct LossTriple {
  double adv = 0.0;
  double aux = 0.0;
  double energy = 0.0;
  double total = 0.0;  // adv + aux + lambda * energy
};

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double adv = 0.0;
  double aux = 0.0;
  double energy = 0.0;
  double g_total = 0.0;
  double d_loss = 0.0;
  metrics::EvalResult eval{};
  double seconds = 0.0;  // wall clock, informational only
};

struct RunRecord {
  std::string campaign_id;
  energy::EnergySourceKind variant = energy::EnergySourceKind::kNoRegularizer;
  std::uint64_t seed = 0;
  std::vector<EpochMetrics> epochs;
  std::optional<std::size_t> best_fid_epoch;
  double wall_seconds = 0.0;
  bool diverged = false;
  std::string diagnostic;
};

/// One ACGAN run: G, D, their Adam states, the energy source and the
/// latent stream. Everything is derived from (config.seed, config).
class AcganTrainer {
 public:
  explicit AcganTrainer(const TrainConfig& config);

  /// One optimizer step over an effective batch (micro-batches of
  /// config.micro_batch rows). Returns the mean discriminator loss.
  double discriminator_step(const nn::Matrix& real, std::span<const int> labels);

  /// Accumulates generator gradients over one effective batch without stepping.
  LossTriple accumulate_generator_gradients();
  /// accumulate_generator_gradients() followed by one Adam step.
  LossTriple generator_step();

  GeneratorNet& generator() { return generator_; }
  const GeneratorNet& generator() const { return generator_; }
  DiscriminatorNet& discriminator() { return discriminator_; }
  energy::EnergySource& energy_source() { return *energy_; }
  nn::Adam& generator_optimizer() { return g_opt_; }
  nn::Adam& discriminator_optimizer() { return d_opt_; }
  /// Generator weights plus the energy source's own trainable weights.
  const nn::ParameterList& generator_parameters() const { return g_params_; }
  const TrainConfig& config() const { return config_; }

 private:
  TrainConfig config_;
  GeneratorNet generator_;
  DiscriminatorNet discriminator_;
  std::unique_ptr<energy::EnergySource> energy_;
  nn::ParameterList g_params_;
  nn::Adam g_opt_;
  nn::Adam d_opt_;
  Rng latent_;
};

/// Alternates one D and one G effective-batch step over shuffled data,
/// evaluates after every epoch, and records a divergence instead of throwing.
RunRecord train_run(const TrainConfig& config, const data::Dataset& train,
                    const metrics::Evaluator* evaluator);

/// Epoch with the lowest FID; ties go to the earliest.
std::optional<std::size_t> best_fid_epoch(const std::vector<EpochMetrics>& rows);

}  // namespace qgl::gan
