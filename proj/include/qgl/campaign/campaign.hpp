#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgl/campaign/config.hpp"
#include "qgl/data/dataset.hpp"
#include "qgl/gan/trainer.hpp"
#include "qgl/metrics/classifier.hpp"
#include "qgl/metrics/metrics.hpp"
#include "qgl/stats/report.hpp"

namespace qgl::campaign {

/// Missing or unusable inputs (exit status 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many failed runs (exit status 3).
class InvalidCampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kRunSchemaVersion = 1;
inline constexpr const char* kRunCsvColumns = "epoch,adv,aux,energy,d_loss,accuracy,fid,is,diversity";
inline constexpr double kMaxFailureFraction = 0.2;

/// "<variant>-seed<seed>-<campaign id>"
std::string run_stem(const std::string& id, std::string_view variant, std::uint64_t seed);

/// Schema comment line, column header, one row per epoch. Wall-clock time is
/// kept out so that the bytes depend only on (seed, config).
std::string run_csv(const gan::RunRecord& record);

struct StoredRun {
  int schema_version = 0;
  std::string campaign_id;
  std::string variant;
  std::uint64_t seed = 0;
  std::vector<gan::EpochMetrics> epochs;
  std::optional<std::size_t> best_fid_epoch;
  bool diverged = false;
  std::string diagnostic;
  double wall_seconds = 0.0;
};

StoredRun parse_run_csv(const std::string& text);

/// CSV first, then the JSON summary that marks the run complete.
void write_run(const std::filesystem::path& dir, const gan::RunRecord& record);
/// nullopt unless both files exist and the summary is marked complete.
std::optional<StoredRun> read_run(const std::filesystem::path& dir, const std::string& id,
                                  std::string_view variant, std::uint64_t seed);

/// Dataset cache, frozen classifier and evaluator shared read-only by all runs.
struct Workspace {
  data::DatasetSplit data;
  std::unique_ptr<metrics::FeatureClassifier> classifier;
  std::unique_ptr<metrics::Evaluator> evaluator;
};

data::DatasetSplit make_dataset(const CampaignConfig& c);
/// Requires the cache and a classifier meeting min_classifier_accuracy.
Workspace load_workspace(const CampaignConfig& c);

gan::RunRecord execute_run(const CampaignConfig& c, const Workspace& ws, std::string_view variant,
                           std::uint64_t seed);

struct CampaignOutcome {
  std::size_t planned = 0;
  std::size_t trained = 0;
  std::size_t reused = 0;
  std::size_t failed = 0;
  std::vector<std::string> failures;
  bool valid = true;
};

/// Runs every missing (variant, seed) on c.workers threads. Completed runs
/// are never recomputed. Writes config-<id>.json and status-<id>.json.
CampaignOutcome run_campaign(const CampaignConfig& c, const Workspace& ws, std::ostream* log);

struct CampaignReport {
  stats::AblationReport report;
  std::vector<std::uint64_t> excluded_seeds;  // seeds with a failed run in any variant
  std::vector<std::string> plot_csv;          // accuracy, fid, is, diversity
};

/// Final-epoch metrics of every stored run feed the statistics. Refuses
/// mixed schema versions and lists absent runs.
CampaignReport build_campaign_report(const CampaignConfig& c);
/// report-<id>.json, report-<id>.txt, comparisons-<id>.csv, plot-<metric>-<id>.csv.
void write_campaign_report(const CampaignConfig& c, const CampaignReport& r);

}  // namespace qgl::campaign
