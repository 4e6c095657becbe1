#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace phigeo {

// FNV-1a 64-bit hash; artifacts are compared across runs by this digest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Digest of a file's bytes.  Errc::parameter when unreadable.
std::uint64_t hash_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

// Creates parent directories; writes bytes verbatim (binary mode).
void write_text_file(const std::filesystem::path& path,
                     std::string_view content);

// RFC-4180-style quoting, applied only when the cell needs it.
std::string csv_escape(const std::string& cell);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace phigeo
