#include "qgl/campaign/commands.hpp"

#include <cstdio>
#include <filesystem>

#include "qgl/campaign/campaign.hpp"
#include "qgl/core/errors.hpp"
#include "qgl/ising/ising.hpp"

namespace qgl::campaign {

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const IncompleteCampaignError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidCampaign;
  } catch (const InvalidCampaignError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidCampaign;
  } catch (const ProtocolError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidCampaign;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_prepare_data(const CampaignConfig& c, std::ostream& out) {
  c.validate();
  data::DatasetSplit split;
  if (c.dataset == "mnist") {
    try {
      data::locate_mnist(c.data_dir);
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
  }
  split = make_dataset(c);
  const auto path = cache_path(c);
  data::write_cache(path, split);
  out << "wrote " << path.string() << ": " << split.train.size() << " train / "
      << split.test.size() << " test, " << split.train.height << "x" << split.train.width
      << " pixels, " << split.train.n_classes << " classes\n";
  return kExitOk;
}

int cmd_train_classifier(const CampaignConfig& c, std::ostream& out) {
  c.validate();
  const auto cache = cache_path(c);
  if (!std::filesystem::exists(cache))
    throw InputError("dataset cache " + cache.string() + " not found (run prepare-data first)");
  const auto split = data::read_cache(cache);
  const auto clf = metrics::train_feature_classifier(split.train, split.test, c.classifier);
  const auto path = classifier_path(c);
  metrics::save_classifier(path, clf);
  out << "wrote " << path.string() << ": test accuracy " << clf.test_accuracy() << "\n";
  if (clf.test_accuracy() < c.min_classifier_accuracy) {
    out << "warning: below the " << c.min_classifier_accuracy
        << " accuracy required before metrics are trusted\n";
  }
  return kExitOk;
}

int cmd_oracle(const CampaignConfig& c, std::optional<std::size_t> class_label, std::ostream& out) {
  const auto& spec = c.train.energy.ising;
  spec.validate();
  if (class_label && *class_label >= spec.n_classes)
    throw std::invalid_argument("class " + std::to_string(*class_label) + " outside [0, " +
                                std::to_string(spec.n_classes) + ")");
  out << "class,ground_energy,bitstring\n";
  for (std::size_t k = 0; k < spec.n_classes; ++k) {
    if (class_label && *class_label != k) continue;
    const auto g = quantum::ground_state_energy(ising::build_class_hamiltonian(spec, k));
    std::string bits;
    for (std::size_t q = 0; q < spec.n_qubits; ++q) bits += ((g.index >> q) & 1U) ? '1' : '0';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", g.energy);
    out << k << ',' << buf << ',' << bits << "\n";
  }
  return kExitOk;
}

int cmd_train(const CampaignConfig& c, const std::string& variant, std::uint64_t seed,
              std::ostream& out) {
  c.validate();
  energy::parse_kind(variant);
  const Workspace ws = load_workspace(c);
  const auto record = execute_run(c, ws, variant, seed);
  const auto dir = campaign_dir(c);
  write_run(dir, record);
  out << "wrote " << (dir / "runs" / (run_stem(record.campaign_id, variant, seed) + ".csv")).string()
      << " (" << record.epochs.size() << " epochs, " << record.wall_seconds << " s)\n";
  if (record.diverged) out << "run diverged: " << record.diagnostic << "\n";
  return kExitOk;
}

int cmd_report(const CampaignConfig& c, std::ostream& out) {
  const auto r = build_campaign_report(c);
  write_campaign_report(c, r);
  out << "campaign " << campaign_id(c) << "\n" << r.report.to_text();
  return kExitOk;
}

int cmd_ablate(const CampaignConfig& c, std::ostream& out) {
  c.validate();
  const Workspace ws = load_workspace(c);
  out << "campaign " << campaign_id(c) << " -> " << campaign_dir(c).string() << "\n";
  const auto outcome = run_campaign(c, ws, &out);
  out << outcome.trained << " trained, " << outcome.reused << " reused, " << outcome.failed
      << " failed of " << outcome.planned << "\n";
  if (!outcome.valid) {
    out << "campaign invalid: more than " << kMaxFailureFraction * 100 << "% of runs failed\n";
    return kExitInvalidCampaign;
  }
  return cmd_report(c, out);
}

}  // namespace qgl::campaign
