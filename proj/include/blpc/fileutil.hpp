#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace blpc {

/// Whole file as bytes. Throws IoError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace blpc
