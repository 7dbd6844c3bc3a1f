#pragma once

#include <filesystem>
#include <string_view>

namespace bseg {

/// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace bseg
