#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qgl::data {

inline constexpr std::uint8_t kIdxUnsignedByte = 0x08;
inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Parsed IDX header plus a view of the payload. The view borrows the
/// buffer passed to parse_idx.
struct IdxTensor {
  std::uint32_t magic = 0;
  std::uint8_t dtype = 0;
  std::vector<std::uint32_t> dims;
  std::span<const std::uint8_t> payload;

  std::size_t element_count() const;
};

/// Validates magic (two zero bytes, dtype, dimension count), the big-endian
/// dimension table and the exact payload length. Only unsigned-byte payloads
/// are supported. Failures throw ParseError carrying the offending offset.
IdxTensor parse_idx(std::span<const std::uint8_t> bytes);
/// As above, and the whole 32-bit magic must equal `expected_magic`.
IdxTensor parse_idx(std::span<const std::uint8_t> bytes, std::uint32_t expected_magic);

/// Reads a file, inflating it when gzip-compressed (by magic, not extension).
std::vector<std::uint8_t> read_maybe_gzip(const std::filesystem::path& path);

}  // namespace qgl::data
