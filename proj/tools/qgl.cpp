#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgl/campaign/commands.hpp"

using namespace qgl::campaign;
using nlohmann::json;

namespace {

struct Overrides {
  std::string config_file;
  std::optional<std::string> dataset, data_dir, output_dir;
  std::optional<std::size_t> epochs, workers, max_batches;
  std::optional<double> lambda, delta_acc, delta_fid, delta_is, delta_diversity, d_cut;
  std::vector<std::string> variants, sets;
  std::vector<std::uint64_t> seeds;
};

void add_common(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_file, "JSON config with flat keys");
  app.add_option("--dataset", o.dataset, "mnist or synthetic");
  app.add_option("--data-dir", o.data_dir, "IDX files, dataset cache and classifier");
  app.add_option("--output-dir", o.output_dir, "campaign output root");
  app.add_option("--epochs", o.epochs);
  app.add_option("--workers", o.workers);
  app.add_option("--max-batches", o.max_batches, "cap on effective batches per epoch");
  app.add_option("--lambda", o.lambda, "energy weight");
  app.add_option("--variants", o.variants)->delimiter(',');
  app.add_option("--seeds", o.seeds)->delimiter(',');
  app.add_option("--delta-acc", o.delta_acc);
  app.add_option("--delta-fid", o.delta_fid);
  app.add_option("--delta-is", o.delta_is);
  app.add_option("--delta-diversity", o.delta_diversity);
  app.add_option("--d-cut", o.d_cut);
  app.add_option("--set", o.sets, "key=value for any config key (value parsed as JSON)");
}

CampaignConfig resolve(const Overrides& o) {
  CampaignConfig c = o.config_file.empty() ? CampaignConfig{} : load_config(o.config_file);
  apply_environment(c);
  json j = json::object();
  if (o.dataset) j["dataset"] = *o.dataset;
  if (o.data_dir) j["data_dir"] = *o.data_dir;
  if (o.output_dir) j["output_dir"] = *o.output_dir;
  if (o.epochs) j["epochs"] = *o.epochs;
  if (o.workers) j["workers"] = *o.workers;
  if (o.max_batches) j["max_batches_per_epoch"] = *o.max_batches;
  if (o.lambda) j["lambda_energy"] = *o.lambda;
  if (!o.variants.empty()) j["variants"] = o.variants;
  if (!o.seeds.empty()) j["seeds"] = o.seeds;
  if (o.delta_acc) j["delta_acc"] = *o.delta_acc;
  if (o.delta_fid) j["delta_fid"] = *o.delta_fid;
  if (o.delta_is) j["delta_is"] = *o.delta_is;
  if (o.delta_diversity) j["delta_diversity"] = *o.delta_diversity;
  if (o.d_cut) j["cohens_d_cut"] = *o.d_cut;
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + kv);
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    j[key] = json::accept(value) ? json::parse(value) : json(value);
  }
  apply_json(c, j);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QACGAN ablation lab"};
  app.require_subcommand(1);
  Overrides o;
  add_common(app, o);

  auto* prepare = app.add_subcommand("prepare-data", "validate, downscale and cache the dataset");
  auto* classifier = app.add_subcommand("train-classifier", "train the frozen metric classifier");
  auto* oracle = app.add_subcommand("oracle", "exact ground energies of the class Hamiltonians");
  std::string oracle_class = "all";
  oracle->add_option("--class", oracle_class, "class index or 'all'");
  auto* train = app.add_subcommand("train", "one (variant, seed) run");
  std::string variant = "vqe";
  std::uint64_t seed = 42;
  train->add_option("--variant", variant, "vqe, mlp, bias, noise or none");
  train->add_option("--seed", seed);
  auto* ablate = app.add_subcommand("ablate", "all variants x seeds, then the report");
  auto* report = app.add_subcommand("report", "statistics over a finished campaign");
  for (auto* sub : {prepare, classifier, oracle, train, ablate, report}) add_common(*sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  return guarded(
      [&] {
        const CampaignConfig c = resolve(o);
        if (*prepare) return cmd_prepare_data(c, std::cout);
        if (*classifier) return cmd_train_classifier(c, std::cout);
        if (*oracle) {
          std::optional<std::size_t> k;
          if (oracle_class != "all") k = std::stoul(oracle_class);
          return cmd_oracle(c, k, std::cout);
        }
        if (*train) return cmd_train(c, variant, seed, std::cout);
        if (*ablate) return cmd_ablate(c, std::cout);
        return cmd_report(c, std::cout);
      },
      std::cerr);
}
