#pragma once

#include <filesystem>

#include "qgl/nn/layers.hpp"

namespace qgl::nn {

// Binary layout: "QGL1", then every parameter's values as little-endian
// float64 in list order (row-major). The name table lives in a JSON sidecar
// at <path>.json: {"format": "QGL1", "parameters": [{"name", "rows", "cols",
// "offset", "count"}, ...]} where offset/count are in values, not bytes.

void save_checkpoint(const std::filesystem::path& path, const ParameterList& params);

/// Loads values by name into existing tensors; names and shapes must match.
void load_checkpoint(const std::filesystem::path& path, ParameterList& params);

}  // namespace qgl::nn
