#pragma once

#include <filesystem>
#include <string>

namespace heckit {

// Writes to a temporary sibling and renames it over the target; parent directories are created.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace heckit
