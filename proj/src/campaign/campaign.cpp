#include "qgl/campaign/campaign.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qgl/core/errors.hpp"
#include "qgl/core/io.hpp"

namespace qgl::campaign {

using nlohmann::json;
namespace fs = std::filesystem;

std::string run_stem(const std::string& id, std::string_view variant, std::uint64_t seed) {
  return std::string(variant) + "-seed" + std::to_string(seed) + "-" + id;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path runs_dir(const fs::path& dir) { return dir / "runs"; }

}  // namespace

std::string run_csv(const gan::RunRecord& r) {
  std::ostringstream out;
  out << "# qgl-run v" << kRunSchemaVersion << " campaign=" << r.campaign_id
      << " variant=" << energy::to_string(r.variant) << " seed=" << r.seed
      << " diverged=" << (r.diverged ? 1 : 0) << "\n";
  out << kRunCsvColumns << "\n";
  for (const auto& e : r.epochs) {
    out << e.epoch;
    for (double v : {e.adv, e.aux, e.energy, e.d_loss, e.eval.accuracy, e.eval.fid,
                     e.eval.inception_score, e.eval.diversity})
      out << ',' << g17(v);
    out << "\n";
  }
  return out.str();
}

StoredRun parse_run_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# qgl-run v", 0) != 0)
    throw ProtocolError("run csv: missing schema line");
  StoredRun s;
  std::istringstream head(line.substr(11));
  if (!(head >> s.schema_version)) throw ProtocolError("run csv: unreadable schema version");
  std::string kv;
  while (head >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "campaign") s.campaign_id = value;
    else if (key == "variant") s.variant = value;
    else if (key == "seed") s.seed = std::stoull(value);
    else if (key == "diverged") s.diverged = value == "1";
  }
  if (s.schema_version != kRunSchemaVersion) return s;
  if (!std::getline(in, line) || line != kRunCsvColumns)
    throw ProtocolError("run csv: unexpected column header \"" + line + "\"");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> f;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      f.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str()) throw ProtocolError("run csv: bad number \"" + cell + "\"");
    }
    if (f.size() != 9) throw ProtocolError("run csv: expected 9 fields, got " + std::to_string(f.size()));
    gan::EpochMetrics e;
    e.epoch = static_cast<std::size_t>(f[0]);
    e.adv = f[1];
    e.aux = f[2];
    e.energy = f[3];
    e.d_loss = f[4];
    e.eval = {f[5], f[6], f[7], f[8]};
    s.epochs.push_back(e);
  }
  return s;
}

void write_run(const fs::path& dir, const gan::RunRecord& r) {
  const std::string stem = run_stem(r.campaign_id, energy::to_string(r.variant), r.seed);
  write_file_atomic(runs_dir(dir) / (stem + ".csv"), run_csv(r));
  json seconds = json::array();
  for (const auto& e : r.epochs) seconds.push_back(e.seconds);
  const json summary = {
      {"schema_version", kRunSchemaVersion},
      {"campaign_id", r.campaign_id},
      {"variant", std::string(energy::to_string(r.variant))},
      {"seed", r.seed},
      {"epochs", r.epochs.size()},
      {"best_fid_epoch", r.best_fid_epoch ? json(*r.best_fid_epoch) : json(nullptr)},
      {"wall_seconds", r.wall_seconds},
      {"epoch_seconds", seconds},
      {"diverged", r.diverged},
      {"diagnostic", r.diagnostic},
      {"complete", true},
  };
  write_file_atomic(runs_dir(dir) / (stem + ".json"), summary.dump(2) + "\n");
}

std::optional<StoredRun> read_run(const fs::path& dir, const std::string& id,
                                  std::string_view variant, std::uint64_t seed) {
  const std::string stem = run_stem(id, variant, seed);
  const fs::path csv = runs_dir(dir) / (stem + ".csv");
  const fs::path summary = runs_dir(dir) / (stem + ".json");
  if (!fs::exists(csv) || !fs::exists(summary)) return std::nullopt;
  json j;
  try {
    j = json::parse(read_file(summary));
  } catch (const json::parse_error&) {
    return std::nullopt;
  }
  if (!j.value("complete", false)) return std::nullopt;
  StoredRun s = parse_run_csv(read_file(csv));
  if (s.campaign_id != id || s.variant != variant || s.seed != seed)
    throw ProtocolError("run file " + csv.string() + " does not match its name");
  if (j.contains("best_fid_epoch") && !j["best_fid_epoch"].is_null())
    s.best_fid_epoch = j["best_fid_epoch"].get<std::size_t>();
  s.diagnostic = j.value("diagnostic", std::string());
  s.wall_seconds = j.value("wall_seconds", 0.0);
  return s;
}

data::DatasetSplit make_dataset(const CampaignConfig& c) {
  if (c.dataset == "mnist") return data::load_mnist(c.data_dir, c.downscale);
  data::DatasetSplit split;
  split.train = data::synthetic_gmm(c.synthetic_train_per_class, 10, c.synthetic_dim, c.synthetic_seed);
  split.test = data::synthetic_gmm(c.synthetic_test_per_class, 10, c.synthetic_dim, c.synthetic_seed + 1);
  return split;
}

Workspace load_workspace(const CampaignConfig& c) {
  const fs::path cache = cache_path(c);
  if (!fs::exists(cache))
    throw InputError("dataset cache " + cache.string() + " not found (run prepare-data first)");
  const fs::path clf = classifier_path(c);
  if (!fs::exists(clf))
    throw InputError("classifier " + clf.string() + " not found (run train-classifier first)");
  Workspace ws;
  ws.data = data::read_cache(cache);
  ws.classifier = std::make_unique<metrics::FeatureClassifier>(metrics::load_classifier(clf));
  if (ws.classifier->pixels() != ws.data.train.pixels())
    throw InputError("classifier input size does not match the dataset cache");
  if (ws.classifier->test_accuracy() < c.min_classifier_accuracy)
    throw InputError("classifier test accuracy " + g17(ws.classifier->test_accuracy()) +
                     " is below the required " + g17(c.min_classifier_accuracy));
  ws.evaluator = std::make_unique<metrics::Evaluator>(*ws.classifier, ws.data.test, c.train.eval,
                                                      c.reference_samples);
  return ws;
}

gan::RunRecord execute_run(const CampaignConfig& c, const Workspace& ws, std::string_view variant,
                           std::uint64_t seed) {
  const auto cfg = run_config(c, variant, seed, ws.data.train.pixels());
  gan::RunRecord r = gan::train_run(cfg, ws.data.train, ws.evaluator.get());
  r.campaign_id = campaign_id(c);
  return r;
}

CampaignOutcome run_campaign(const CampaignConfig& c, const Workspace& ws, std::ostream* log) {
  c.validate();
  const std::string id = campaign_id(c);
  const fs::path dir = campaign_dir(c);
  const fs::path config_file = dir / ("config-" + id + ".json");
  if (!fs::exists(config_file)) {
    json j = to_json(c);
    j["campaign_id"] = id;
    write_file_atomic(config_file, j.dump(2) + "\n");
  }

  struct Job {
    std::string variant;
    std::uint64_t seed;
  };
  CampaignOutcome out;
  std::vector<Job> pending;
  for (const auto& v : c.variants)
    for (auto s : c.seeds) {
      ++out.planned;
      if (auto stored = read_run(dir, id, v, s)) {
        ++out.reused;
        if (stored->diverged) {
          ++out.failed;
          out.failures.push_back(run_stem(id, v, s) + ": " + stored->diagnostic);
        }
      } else {
        pending.push_back({v, s});
      }
    }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      const Job& job = pending[i];
      const std::string stem = run_stem(id, job.variant, job.seed);
      std::string failure;
      double seconds = 0.0;
      try {
        const gan::RunRecord r = execute_run(c, ws, job.variant, job.seed);
        write_run(dir, r);
        seconds = r.wall_seconds;
        if (r.diverged) failure = r.diagnostic;
      } catch (const std::exception& e) {
        failure = e.what();
        try {
          write_file_atomic(runs_dir(dir) / (stem + ".error.txt"), failure + "\n");
        } catch (const std::exception&) {
        }
      }
      std::lock_guard lock(mu);
      ++out.trained;
      if (!failure.empty()) {
        ++out.failed;
        out.failures.push_back(stem + ": " + failure);
      }
      if (log != nullptr) {
        *log << "[" << out.trained << "/" << pending.size() << "] " << stem
             << (failure.empty() ? "" : " FAILED: " + failure);
        if (failure.empty()) {
          char buf[32];
          std::snprintf(buf, sizeof buf, " (%.1f s)", seconds);
          *log << buf;
        }
        *log << std::endl;
      }
    }
  };
  const std::size_t n_threads = std::min(c.workers, pending.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  if (n_threads > 0) worker();
  for (auto& t : threads) t.join();

  out.valid = static_cast<double>(out.failed) <= kMaxFailureFraction * static_cast<double>(out.planned);
  const json status = {{"campaign_id", id},         {"planned", out.planned},
                       {"trained", out.trained},    {"reused", out.reused},
                       {"failed", out.failed},      {"failures", out.failures},
                       {"valid", out.valid}};
  write_file_atomic(dir / ("status-" + id + ".json"), status.dump(2) + "\n");
  return out;
}

CampaignReport build_campaign_report(const CampaignConfig& c) {
  c.validate();
  const std::string id = campaign_id(c);
  const fs::path dir = campaign_dir(c);

  std::vector<std::string> missing_variants;
  for (const auto& v : stats::kRequiredVariants)
    if (std::find(c.variants.begin(), c.variants.end(), v) == c.variants.end())
      missing_variants.push_back(v);
  if (!missing_variants.empty()) {
    std::string list;
    for (const auto& m : missing_variants) list += (list.empty() ? "" : ", ") + m;
    throw IncompleteCampaignError("campaign is missing variants: " + list);
  }

  std::map<std::string, std::map<std::uint64_t, StoredRun>> runs;
  std::vector<std::string> absent;
  std::set<int> versions;
  for (const auto& v : stats::kRequiredVariants)
    for (auto s : c.seeds) {
      auto run = read_run(dir, id, v, s);
      if (!run) {
        absent.push_back(run_stem(id, v, s));
        continue;
      }
      versions.insert(run->schema_version);
      runs[v].emplace(s, std::move(*run));
    }
  if (versions.size() > 1) throw ProtocolError("campaign mixes run schema versions");
  if (!versions.empty() && *versions.begin() != kRunSchemaVersion)
    throw ProtocolError("unsupported run schema version " + std::to_string(*versions.begin()));
  if (!absent.empty()) {
    std::string list;
    for (const auto& a : absent) list += (list.empty() ? "" : ", ") + a;
    throw IncompleteCampaignError("campaign is missing runs: " + list);
  }
  if (c.train.epochs == 0) throw InvalidCampaignError("campaign has no epochs to report");

  CampaignReport out;
  std::size_t failed = 0;
  std::vector<std::uint64_t> kept;
  for (auto s : c.seeds) {
    bool ok = true;
    for (const auto& v : stats::kRequiredVariants) {
      const StoredRun& r = runs[v].at(s);
      if (r.diverged || r.epochs.size() != c.train.epochs) {
        ok = false;
        ++failed;
      }
    }
    (ok ? kept : out.excluded_seeds).push_back(s);
  }
  const double planned = static_cast<double>(c.seeds.size() * stats::kRequiredVariants.size());
  if (static_cast<double>(failed) > kMaxFailureFraction * planned)
    throw InvalidCampaignError("campaign invalid: " + std::to_string(failed) + " of " +
                               std::to_string(static_cast<std::size_t>(planned)) + " runs failed");
  if (kept.size() < 2) throw InvalidCampaignError("fewer than two seeds completed in every variant");

  auto value = [](const gan::EpochMetrics& e, stats::Metric m) {
    switch (m) {
      case stats::Metric::kAccuracy: return e.eval.accuracy;
      case stats::Metric::kFid: return e.eval.fid;
      case stats::Metric::kInceptionScore: return e.eval.inception_score;
      case stats::Metric::kDiversity: return e.eval.diversity;
    }
    return 0.0;
  };

  std::vector<stats::VariantSample> samples;
  for (const auto& v : stats::kRequiredVariants) {
    stats::VariantSample vs;
    vs.variant = v;
    vs.seeds = kept;
    for (auto s : kept)
      for (auto m : stats::kAllMetrics) vs.values[m].push_back(value(runs[v].at(s).epochs.back(), m));
    samples.push_back(std::move(vs));
  }
  out.report = stats::build_report(samples, c.thresholds, c.bootstrap_resamples, c.bootstrap_seed);

  for (auto m : stats::kAllMetrics) {
    std::ostringstream csv;
    csv << "epoch";
    for (const auto& v : stats::kRequiredVariants) csv << ',' << v << "_mean," << v << "_sd";
    csv << "\n";
    for (std::size_t e = 0; e < c.train.epochs; ++e) {
      csv << e + 1;
      for (const auto& v : stats::kRequiredVariants) {
        std::vector<double> xs;
        for (auto s : kept) xs.push_back(value(runs[v].at(s).epochs[e], m));
        csv << ',' << g17(stats::mean(xs)) << ',' << g17(stats::sample_sd(xs));
      }
      csv << "\n";
    }
    out.plot_csv.push_back(csv.str());
  }
  return out;
}

void write_campaign_report(const CampaignConfig& c, const CampaignReport& r) {
  const std::string id = campaign_id(c);
  const fs::path dir = campaign_dir(c);
  json j = json::parse(r.report.to_json());
  j["campaign_id"] = id;
  j["excluded_seeds"] = r.excluded_seeds;
  write_file_atomic(dir / ("report-" + id + ".json"), j.dump(2) + "\n");
  std::string text = "campaign " + id + "\n";
  if (!r.excluded_seeds.empty()) {
    text += "excluded seeds (failed runs):";
    for (auto s : r.excluded_seeds) text += " " + std::to_string(s);
    text += "\n";
  }
  write_file_atomic(dir / ("report-" + id + ".txt"), text + r.report.to_text());
  write_file_atomic(dir / ("comparisons-" + id + ".csv"), r.report.comparisons_csv());
  for (std::size_t i = 0; i < r.plot_csv.size(); ++i)
    write_file_atomic(dir / ("plot-" + std::string(stats::to_string(stats::kAllMetrics[i])) + "-" +
                             id + ".csv"),
                      r.plot_csv[i]);
}

}  // namespace qgl::campaign
