#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qgl {

/// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

void append_f64_le(std::string& out, double v);
double read_f64_le(const unsigned char* p);
void append_u64_le(std::string& out, std::uint64_t v);
std::uint64_t read_u64_le(const unsigned char* p);
std::uint32_t read_u32_be(const unsigned char* p);

}  // namespace qgl
