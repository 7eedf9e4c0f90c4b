#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace procmine {

std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary sibling file and renames it over `path`, so
/// readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace procmine
