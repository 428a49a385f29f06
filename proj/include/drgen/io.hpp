#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace drgen {

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never observe a
/// partially written file.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// 64-bit FNV-1a. Used for config and scenario digests (change detection, not security).
std::uint64_t fnv1a64(std::string_view bytes);

/// Lower-case, zero-padded 16-digit hex.
std::string hex64(std::uint64_t value);

}  // namespace drgen
