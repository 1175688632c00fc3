#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qgl {

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator with portable draws. Streams for different purposes
/// are derived from one run seed by a domain label, so that e.g. metric
/// sampling never shifts the training stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, std::string_view domain, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n). n must be positive.
  std::size_t index(std::size_t n);
  /// Standard normal via Box-Muller; one value per call.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace qgl
