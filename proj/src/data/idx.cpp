#include "qgl/data/idx.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qgl/core/errors.hpp"
#include "qgl/core/io.hpp"

namespace qgl::data {

std::size_t IdxTensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw ParseError("IDX: truncated magic", bytes.size());
  if (bytes[0] != 0 || bytes[1] != 0) throw ParseError("IDX: bad magic (leading bytes not zero)", 0);
  if (bytes[2] != kIdxUnsignedByte) {
    throw ParseError("IDX: unsupported dtype code " + std::to_string(bytes[2]), 2);
  }
  const std::size_t ndims = bytes[3];
  if (ndims == 0) throw ParseError("IDX: zero dimension count", 3);
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header) throw ParseError("IDX: truncated dimension table", bytes.size());

  IdxTensor t;
  t.magic = read_u32_be(bytes.data());
  t.dtype = bytes[2];
  std::size_t expected = 1;
  for (std::size_t i = 0; i < ndims; ++i) {
    const std::uint32_t d = read_u32_be(bytes.data() + 4 + 4 * i);
    if (d == 0) throw ParseError("IDX: zero-length dimension", 4 + 4 * i);
    t.dims.push_back(d);
    if (expected > (std::size_t{1} << 40) / d) throw ParseError("IDX: implausible dimensions", 4 + 4 * i);
    expected *= d;
  }
  const std::size_t available = bytes.size() - header;
  if (available < expected) throw ParseError("IDX: truncated payload", bytes.size());
  if (available > expected) throw ParseError("IDX: trailing bytes after payload", header + expected);
  t.payload = bytes.subspan(header, expected);
  return t;
}

IdxTensor parse_idx(std::span<const std::uint8_t> bytes, std::uint32_t expected_magic) {
  if (bytes.size() >= 4 && read_u32_be(bytes.data()) != expected_magic) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "IDX: magic 0x%08x, expected 0x%08x", read_u32_be(bytes.data()),
                  expected_magic);
    throw ParseError(buf, 0);
  }
  return parse_idx(bytes);
}

std::vector<std::uint8_t> read_maybe_gzip(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  const bool gz = raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
                  static_cast<unsigned char>(raw[1]) == 0x8b;
  if (!gz) return {raw.begin(), raw.end()};

  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) throw std::runtime_error("zlib: inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(raw.data()));
  zs.avail_in = static_cast<uInt>(raw.size());
  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk;
    zs.avail_out = sizeof(chunk);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      const auto at = zs.total_in;
      inflateEnd(&zs);
      throw ParseError("gzip: corrupt stream in " + path.string(), at);
    }
    out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
    if (rc != Z_STREAM_END && zs.avail_in == 0 && zs.avail_out != 0) {
      const auto at = zs.total_in;
      inflateEnd(&zs);
      throw ParseError("gzip: truncated stream in " + path.string(), at);
    }
  }
  inflateEnd(&zs);
  return out;
}

}  // namespace qgl::data
