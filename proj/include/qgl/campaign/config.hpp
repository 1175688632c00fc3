#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgl/gan/trainer.hpp"
#include "qgl/metrics/classifier.hpp"
#include "qgl/stats/report.hpp"

namespace qgl::campaign {

inline constexpr const char* kDataDirEnv = "QGL_DATA_DIR";

struct CampaignConfig {
  std::string dataset = "synthetic";  // "mnist" or "synthetic"
  std::filesystem::path data_dir = "data";
  std::filesystem::path output_dir = "runs";

  std::size_t downscale = 2;
  std::size_t synthetic_train_per_class = 1500;
  std::size_t synthetic_test_per_class = 300;
  std::size_t synthetic_dim = 64;
  std::uint64_t synthetic_seed = 1;

  metrics::ClassifierTrainConfig classifier{};
  /// Metrics computed with a weaker classifier are not trusted.
  double min_classifier_accuracy = 0.95;
  std::size_t reference_samples = 2000;

  gan::TrainConfig train{};
  std::vector<std::string> variants = {"vqe", "mlp", "bias", "noise", "none"};
  std::vector<std::uint64_t> seeds = {42, 2025, 123, 456, 789};
  std::size_t workers = 1;

  stats::EquivalenceThresholds thresholds{};
  std::size_t bootstrap_resamples = 10000;
  std::uint64_t bootstrap_seed = stats::kDefaultBootstrapSeed;

  void validate() const;
};

/// Flat-key view. Unknown keys are rejected by apply_json.
nlohmann::json to_json(const CampaignConfig& c);
void apply_json(CampaignConfig& c, const nlohmann::json& j);
CampaignConfig load_config(const std::filesystem::path& path);

/// Applies QGL_DATA_DIR when set.
void apply_environment(CampaignConfig& c);

/// 16 hex digits of a hash over every key that changes run outputs. Paths,
/// worker count and report-only settings are excluded.
std::string campaign_id(const CampaignConfig& c);

/// TrainConfig for one (variant, seed) with network shape matched to the data.
gan::TrainConfig run_config(const CampaignConfig& c, std::string_view variant, std::uint64_t seed,
                            std::size_t pixels);

std::string dataset_tag(const CampaignConfig& c);
std::filesystem::path cache_path(const CampaignConfig& c);
std::filesystem::path classifier_path(const CampaignConfig& c);
std::filesystem::path campaign_dir(const CampaignConfig& c);

}  // namespace qgl::campaign
