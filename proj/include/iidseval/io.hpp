#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace iidseval::io {

std::string read_file(const std::filesystem::path& path);

/// Write via a sibling temporary file and rename, so readers never observe a
/// partially written file. Parent directories are created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace iidseval::io
