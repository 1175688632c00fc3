#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "qgl/campaign/config.hpp"

namespace qgl::campaign {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitInvalidCampaign = 3, kExitInternal = 4 };

/// Runs `body`, mapping exceptions to exit codes with a message on `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

int cmd_prepare_data(const CampaignConfig& c, std::ostream& out);
int cmd_train_classifier(const CampaignConfig& c, std::ostream& out);
/// Ground energy and argmin bitstring (qubit 0 first) for one class or all.
int cmd_oracle(const CampaignConfig& c, std::optional<std::size_t> class_label, std::ostream& out);
int cmd_train(const CampaignConfig& c, const std::string& variant, std::uint64_t seed,
              std::ostream& out);
int cmd_ablate(const CampaignConfig& c, std::ostream& out);
int cmd_report(const CampaignConfig& c, std::ostream& out);

}  // namespace qgl::campaign
