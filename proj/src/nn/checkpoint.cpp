#include "qgl/nn/checkpoint.hpp"

#include <json.hpp>
#include <map>
#include <stdexcept>

#include "qgl/core/errors.hpp"
#include "qgl/core/io.hpp"

namespace qgl::nn {
namespace {
constexpr std::string_view kMagic = "QGL1";

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ParameterList& params) {
  std::string bytes(kMagic);
  nlohmann::json table = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& p : params) {
    const Matrix& v = p.tensor.value();
    for (Eigen::Index i = 0; i < v.size(); ++i) append_f64_le(bytes, v.data()[i]);
    table.push_back({{"name", p.name},
                     {"rows", v.rows()},
                     {"cols", v.cols()},
                     {"offset", offset},
                     {"count", v.size()}});
    offset += static_cast<std::size_t>(v.size());
  }
  nlohmann::json meta = {{"format", kMagic}, {"parameters", table}};
  write_file_atomic(path, bytes);
  write_file_atomic(sidecar(path), meta.dump(2) + "\n");
}

void load_checkpoint(const std::filesystem::path& path, ParameterList& params) {
  const std::string bytes = read_file(path);
  if (bytes.size() < kMagic.size() || bytes.compare(0, kMagic.size(), kMagic) != 0) {
    throw ParseError("checkpoint " + path.string() + ": bad magic", 0);
  }
  const auto meta = nlohmann::json::parse(read_file(sidecar(path)));
  std::map<std::string, nlohmann::json> by_name;
  for (const auto& entry : meta.at("parameters")) by_name[entry.at("name")] = entry;
  const std::size_t n_values = (bytes.size() - kMagic.size()) / 8;
  const auto* base = reinterpret_cast<const unsigned char*>(bytes.data()) + kMagic.size();
  for (auto& p : params) {
    auto it = by_name.find(p.name);
    if (it == by_name.end()) throw std::invalid_argument("checkpoint lacks parameter '" + p.name + "'");
    const auto rows = it->second.at("rows").get<Eigen::Index>();
    const auto cols = it->second.at("cols").get<Eigen::Index>();
    const auto offset = it->second.at("offset").get<std::size_t>();
    Matrix& v = p.tensor.mutable_value();
    if (rows != v.rows() || cols != v.cols()) {
      throw std::invalid_argument("checkpoint shape mismatch for '" + p.name + "'");
    }
    if (offset + static_cast<std::size_t>(v.size()) > n_values) {
      throw ParseError("checkpoint truncated while reading '" + p.name + "'",
                       kMagic.size() + 8 * offset);
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v.data()[i] = read_f64_le(base + 8 * (offset + static_cast<std::size_t>(i)));
    }
  }
}

}  // namespace qgl::nn
