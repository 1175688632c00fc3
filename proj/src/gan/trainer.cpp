#include "qgl/gan/trainer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qgl/core/errors.hpp"
#include "qgl/nn/ops.hpp"

namespace qgl::gan {

void TrainConfig::validate() const {
  if (micro_batch == 0 || accumulation_steps == 0) {
    throw std::invalid_argument("TrainConfig: micro_batch and accumulation_steps must be positive");
  }
  if (real_label_smoothing < 0.0 || real_label_smoothing > 1.0) {
    throw std::invalid_argument("TrainConfig: real_label_smoothing must lie in [0, 1]");
  }
  if (!std::isfinite(lambda_energy)) throw std::invalid_argument("TrainConfig: lambda_energy not finite");
  if (net.latent_dim != energy.latent_dim || net.n_classes != energy.ising.n_classes) {
    throw std::invalid_argument("TrainConfig: generator and energy-source shapes disagree");
  }
}

namespace {

nn::ParameterList collect_generator_params(const GeneratorNet& g, const energy::EnergySource& e) {
  nn::ParameterList out;
  nn::append(out, "generator", g.parameters());
  nn::append(out, "energy", e.parameters());
  return out;
}

TrainConfig validated(const TrainConfig& c) {
  c.validate();
  return c;
}

}  // namespace

AcganTrainer::AcganTrainer(const TrainConfig& config)
    : config_(validated(config)),
      generator_([&] {
        Rng rng(config.seed, "init_generator");
        return GeneratorNet(config.net, rng);
      }()),
      discriminator_([&] {
        Rng rng(config.seed, "init_discriminator");
        return DiscriminatorNet(config.net, rng);
      }()),
      energy_(energy::make_energy_source(
          config.energy_source, config.energy, config.seed,
          config.share_embedding ? std::optional<nn::Tensor>(generator_.embedding().table())
                                 : std::nullopt)),
      g_params_(collect_generator_params(generator_, *energy_)),
      g_opt_(g_params_, config.adam),
      d_opt_(discriminator_.parameters(), config.adam),
      latent_(config.seed, "latent") {}

double AcganTrainer::discriminator_step(const nn::Matrix& real, std::span<const int> labels) {
  const std::size_t mb = config_.micro_batch;
  const std::size_t steps = config_.accumulation_steps;
  if (static_cast<std::size_t>(real.rows()) != mb * steps || labels.size() != mb * steps) {
    throw std::invalid_argument("discriminator_step: batch must hold micro_batch * accumulation_steps rows");
  }
  const double inv_steps = 1.0 / static_cast<double>(steps);
  d_opt_.zero_grad();
  double total = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto first = static_cast<Eigen::Index>(s * mb);
    nn::Tensor real_t = nn::Tensor::constant(real.middleRows(first, static_cast<Eigen::Index>(mb)));
    std::span<const int> real_labels = labels.subspan(s * mb, mb);

    const nn::Matrix z = standard_normal(mb, config_.net.latent_dim, latent_);
    const auto fake_labels = metrics::draw_labels(mb, config_.net.n_classes, latent_);
    nn::Tensor fake_t = nn::Tensor::constant(generator_.sample(z, fake_labels));

    const auto out_real = discriminator_.forward(real_t);
    const auto out_fake = discriminator_.forward(fake_t);
    nn::Tensor loss = nn::add(nn::bce_with_logits(out_real.source, config_.real_label_smoothing),
                              nn::bce_with_logits(out_fake.source, 0.0));
    loss = nn::add(loss, nn::cross_entropy(out_real.classes, real_labels));
    if (config_.fake_class_loss) loss = nn::add(loss, nn::cross_entropy(out_fake.classes, fake_labels));
    nn::check_finite(loss, "discriminator loss");
    total += loss.item();
    nn::backward(nn::scale(loss, inv_steps));
  }
  d_opt_.step();
  return total * inv_steps;
}

LossTriple AcganTrainer::accumulate_generator_gradients() {
  const std::size_t mb = config_.micro_batch;
  const std::size_t steps = config_.accumulation_steps;
  const double inv_steps = 1.0 / static_cast<double>(steps);
  const double lambda = config_.lambda_energy;
  g_opt_.zero_grad();
  discriminator_.set_trainable(false);
  LossTriple out;
  try {
    for (std::size_t s = 0; s < steps; ++s) {
      nn::Tensor z = nn::Tensor::constant(standard_normal(mb, config_.net.latent_dim, latent_));
      const auto labels = metrics::draw_labels(mb, config_.net.n_classes, latent_);
      const auto d_out = discriminator_.forward(generator_.forward(z, labels));
      nn::Tensor adv = nn::bce_with_logits(d_out.source, config_.real_label_smoothing);
      nn::Tensor aux = nn::cross_entropy(d_out.classes, labels);
      nn::Tensor energy = nn::mean(energy_->energy(z, labels));
      nn::check_finite(energy, "energy term");
      nn::Tensor loss = nn::add(adv, aux);
      // An exact zero weight leaves the term off the graph entirely.
      if (lambda != 0.0) loss = nn::add(loss, nn::scale(energy, lambda));
      nn::check_finite(loss, "generator loss");
      out.adv += adv.item() * inv_steps;
      out.aux += aux.item() * inv_steps;
      out.energy += energy.item() * inv_steps;
      nn::backward(nn::scale(loss, inv_steps));
    }
  } catch (...) {
    discriminator_.set_trainable(true);
    throw;
  }
  discriminator_.set_trainable(true);
  out.total = out.adv + out.aux + lambda * out.energy;
  return out;
}

LossTriple AcganTrainer::generator_step() {
  LossTriple l = accumulate_generator_gradients();
  g_opt_.step();
  return l;
}

std::optional<std::size_t> best_fid_epoch(const std::vector<EpochMetrics>& rows) {
  std::optional<std::size_t> best;
  double best_fid = 0.0;
  for (const auto& r : rows) {
    if (!best || r.eval.fid < best_fid) {
      best = r.epoch;
      best_fid = r.eval.fid;
    }
  }
  return best;
}

RunRecord train_run(const TrainConfig& config, const data::Dataset& train,
                    const metrics::Evaluator* evaluator) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  RunRecord record;
  record.variant = config.energy_source;
  record.seed = config.seed;
  try {
    AcganTrainer trainer(config);
    const std::size_t batch = config.effective_batch();
    std::size_t batches = train.size() / batch;
    if (config.max_batches_per_epoch > 0) batches = std::min(batches, config.max_batches_per_epoch);
    if (config.epochs > 0 && batches == 0) {
      throw std::invalid_argument("train_run: dataset smaller than one effective batch");
    }
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      const auto epoch_start = Clock::now();
      const auto order = data::shuffled_indices(train.size(), config.seed, epoch);
      EpochMetrics row;
      row.epoch = epoch + 1;
      for (std::size_t b = 0; b < batches; ++b) {
        std::span<const std::size_t> rows(order.data() + b * batch, batch);
        row.d_loss += trainer.discriminator_step(train.gather(rows), train.gather_labels(rows));
        const LossTriple g = trainer.generator_step();
        row.adv += g.adv;
        row.aux += g.aux;
        row.energy += g.energy;
      }
      const double inv = 1.0 / static_cast<double>(batches);
      row.d_loss *= inv;
      row.adv *= inv;
      row.aux *= inv;
      row.energy *= inv;
      row.g_total = row.adv + row.aux + config.lambda_energy * row.energy;
      if (evaluator != nullptr) {
        row.eval = evaluator->evaluate(GeneratorSampler(trainer.generator()), config.seed, epoch);
        if (!std::isfinite(row.eval.fid) || !std::isfinite(row.eval.inception_score)) {
          throw DivergenceError("non-finite evaluation metric at epoch " + std::to_string(epoch + 1));
        }
      }
      row.seconds = std::chrono::duration<double>(Clock::now() - epoch_start).count();
      record.epochs.push_back(row);
    }
  } catch (const DivergenceError& e) {
    record.diverged = true;
    record.diagnostic = e.what();
  }
  record.best_fid_epoch = best_fid_epoch(record.epochs);
  record.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return record;
}

}  // namespace qgl::gan
