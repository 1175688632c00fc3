#include "qgl/campaign/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "qgl/core/io.hpp"
#include "qgl/core/rng.hpp"

namespace qgl::campaign {

using nlohmann::json;

void CampaignConfig::validate() const {
  if (dataset != "mnist" && dataset != "synthetic")
    throw std::invalid_argument("dataset must be \"mnist\" or \"synthetic\", got \"" + dataset + "\"");
  if (downscale == 0) throw std::invalid_argument("downscale must be positive");
  if (dataset == "synthetic" && (synthetic_train_per_class == 0 || synthetic_test_per_class == 0 ||
                                 synthetic_dim == 0))
    throw std::invalid_argument("synthetic sizes must be positive");
  if (variants.empty()) throw std::invalid_argument("variant list is empty");
  std::set<std::string> seen_v;
  for (const auto& v : variants) {
    energy::parse_kind(v);
    if (!seen_v.insert(v).second) throw std::invalid_argument("duplicate variant: " + v);
  }
  if (seeds.empty()) throw std::invalid_argument("seed list is empty");
  std::set<std::uint64_t> seen_s(seeds.begin(), seeds.end());
  if (seen_s.size() != seeds.size()) throw std::invalid_argument("duplicate seed in seed list");
  if (workers == 0) throw std::invalid_argument("workers must be positive");
  if (bootstrap_resamples == 0) throw std::invalid_argument("bootstrap_resamples must be positive");
  thresholds.validate();
  train.validate();
}

json to_json(const CampaignConfig& c) {
  const auto& t = c.train;
  return {
      {"dataset", c.dataset},
      {"data_dir", c.data_dir.string()},
      {"output_dir", c.output_dir.string()},
      {"downscale", c.downscale},
      {"synthetic_train_per_class", c.synthetic_train_per_class},
      {"synthetic_test_per_class", c.synthetic_test_per_class},
      {"synthetic_dim", c.synthetic_dim},
      {"synthetic_seed", c.synthetic_seed},
      {"classifier_epochs", c.classifier.epochs},
      {"classifier_batch_size", c.classifier.batch_size},
      {"classifier_learning_rate", c.classifier.learning_rate},
      {"classifier_seed", c.classifier.seed},
      {"min_classifier_accuracy", c.min_classifier_accuracy},
      {"reference_samples", c.reference_samples},
      {"epochs", t.epochs},
      {"micro_batch", t.micro_batch},
      {"accumulation_steps", t.accumulation_steps},
      {"lambda_energy", t.lambda_energy},
      {"real_label_smoothing", t.real_label_smoothing},
      {"fake_class_loss", t.fake_class_loss},
      {"share_embedding", t.share_embedding},
      {"learning_rate", t.adam.learning_rate},
      {"beta1", t.adam.beta1},
      {"beta2", t.adam.beta2},
      {"adam_epsilon", t.adam.epsilon},
      {"latent_dim", t.net.latent_dim},
      {"max_batches_per_epoch", t.max_batches_per_epoch},
      {"accuracy_samples", t.eval.accuracy_samples},
      {"score_samples", t.eval.score_samples},
      {"score_splits", t.eval.score_splits},
      {"diversity_per_class", t.eval.diversity_per_class},
      {"ansatz_repetitions", t.energy.ansatz_repetitions},
      {"entanglement", quantum::to_string(t.energy.entanglement)},
      {"variants", c.variants},
      {"seeds", c.seeds},
      {"workers", c.workers},
      {"delta_acc", c.thresholds.delta_acc},
      {"delta_fid", c.thresholds.delta_fid},
      {"delta_is", c.thresholds.delta_is},
      {"delta_diversity", c.thresholds.delta_diversity},
      {"cohens_d_cut", c.thresholds.cohens_d_cut},
      {"bootstrap_resamples", c.bootstrap_resamples},
      {"bootstrap_seed", c.bootstrap_seed},
  };
}

namespace {

template <typename T>
void get(const json& j, const char* key, T& out) {
  try {
    out = j.get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config key \"") + key + "\" has the wrong type");
  }
}

}  // namespace

void apply_json(CampaignConfig& c, const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto& t = c.train;
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    std::string s;
    if (key == "dataset") get(v, k, c.dataset);
    else if (key == "data_dir") { get(v, k, s); c.data_dir = s; }
    else if (key == "output_dir") { get(v, k, s); c.output_dir = s; }
    else if (key == "downscale") get(v, k, c.downscale);
    else if (key == "synthetic_train_per_class") get(v, k, c.synthetic_train_per_class);
    else if (key == "synthetic_test_per_class") get(v, k, c.synthetic_test_per_class);
    else if (key == "synthetic_dim") get(v, k, c.synthetic_dim);
    else if (key == "synthetic_seed") get(v, k, c.synthetic_seed);
    else if (key == "classifier_epochs") get(v, k, c.classifier.epochs);
    else if (key == "classifier_batch_size") get(v, k, c.classifier.batch_size);
    else if (key == "classifier_learning_rate") get(v, k, c.classifier.learning_rate);
    else if (key == "classifier_seed") get(v, k, c.classifier.seed);
    else if (key == "min_classifier_accuracy") get(v, k, c.min_classifier_accuracy);
    else if (key == "reference_samples") get(v, k, c.reference_samples);
    else if (key == "epochs") get(v, k, t.epochs);
    else if (key == "micro_batch") get(v, k, t.micro_batch);
    else if (key == "accumulation_steps") get(v, k, t.accumulation_steps);
    else if (key == "lambda_energy") get(v, k, t.lambda_energy);
    else if (key == "real_label_smoothing") get(v, k, t.real_label_smoothing);
    else if (key == "fake_class_loss") get(v, k, t.fake_class_loss);
    else if (key == "share_embedding") get(v, k, t.share_embedding);
    else if (key == "learning_rate") get(v, k, t.adam.learning_rate);
    else if (key == "beta1") get(v, k, t.adam.beta1);
    else if (key == "beta2") get(v, k, t.adam.beta2);
    else if (key == "adam_epsilon") get(v, k, t.adam.epsilon);
    else if (key == "latent_dim") {
      get(v, k, t.net.latent_dim);
      t.energy.latent_dim = t.net.latent_dim;
    }
    else if (key == "max_batches_per_epoch") get(v, k, t.max_batches_per_epoch);
    else if (key == "accuracy_samples") get(v, k, t.eval.accuracy_samples);
    else if (key == "score_samples") get(v, k, t.eval.score_samples);
    else if (key == "score_splits") get(v, k, t.eval.score_splits);
    else if (key == "diversity_per_class") get(v, k, t.eval.diversity_per_class);
    else if (key == "ansatz_repetitions") get(v, k, t.energy.ansatz_repetitions);
    else if (key == "entanglement") { get(v, k, s); t.energy.entanglement = quantum::parse_entanglement(s); }
    else if (key == "variants") get(v, k, c.variants);
    else if (key == "seeds") get(v, k, c.seeds);
    else if (key == "workers") get(v, k, c.workers);
    else if (key == "delta_acc") get(v, k, c.thresholds.delta_acc);
    else if (key == "delta_fid") get(v, k, c.thresholds.delta_fid);
    else if (key == "delta_is") get(v, k, c.thresholds.delta_is);
    else if (key == "delta_diversity") get(v, k, c.thresholds.delta_diversity);
    else if (key == "cohens_d_cut") get(v, k, c.thresholds.cohens_d_cut);
    else if (key == "bootstrap_resamples") get(v, k, c.bootstrap_resamples);
    else if (key == "bootstrap_seed") get(v, k, c.bootstrap_seed);
    else throw std::invalid_argument("unknown config key \"" + key + "\"");
  }
}

CampaignConfig load_config(const std::filesystem::path& path) {
  CampaignConfig c;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  apply_json(c, j);
  return c;
}

void apply_environment(CampaignConfig& c) {
  if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') c.data_dir = dir;
}

namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string campaign_id(const CampaignConfig& c) {
  json j = to_json(c);
  for (const char* k : {"data_dir", "output_dir", "workers", "delta_acc", "delta_fid", "delta_is",
                        "delta_diversity", "cohens_d_cut", "bootstrap_resamples", "bootstrap_seed"})
    j.erase(k);
  return hex16(fnv1a64(j.dump()));
}

gan::TrainConfig run_config(const CampaignConfig& c, std::string_view variant, std::uint64_t seed,
                            std::size_t pixels) {
  gan::TrainConfig t = c.train;
  t.energy_source = energy::parse_kind(variant);
  t.seed = seed;
  t.net.pixels = pixels;
  t.energy.latent_dim = t.net.latent_dim;
  return t;
}

std::string dataset_tag(const CampaignConfig& c) {
  if (c.dataset == "mnist") return "mnist-f" + std::to_string(c.downscale);
  const json j = {{"train", c.synthetic_train_per_class}, {"test", c.synthetic_test_per_class},
                  {"dim", c.synthetic_dim}, {"seed", c.synthetic_seed}};
  return "synthetic-" + hex16(fnv1a64(j.dump())).substr(0, 8);
}

std::filesystem::path cache_path(const CampaignConfig& c) {
  return c.data_dir / (dataset_tag(c) + ".qgd");
}

std::filesystem::path classifier_path(const CampaignConfig& c) {
  const json j = {{"epochs", c.classifier.epochs}, {"batch", c.classifier.batch_size},
                  {"lr", c.classifier.learning_rate},  {"seed", c.classifier.seed}};
  return c.data_dir / ("classifier-" + dataset_tag(c) + "-" +
                       hex16(fnv1a64(j.dump())).substr(0, 8) + ".bin");
}

std::filesystem::path campaign_dir(const CampaignConfig& c) {
  return c.output_dir / ("campaign-" + campaign_id(c));
}

}  // namespace qgl::campaign
