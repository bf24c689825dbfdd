#pragma once

#include <filesystem>
#include <string_view>

namespace dsep::cli {

/// Writes to a sibling temporary file and renames it over `path`, creating
/// parent directories as needed. Errors: Error(InvalidArgument) on I/O
/// failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace dsep::cli
