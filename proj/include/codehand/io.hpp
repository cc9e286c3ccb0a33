#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace codehand::io {

// Whole file as bytes. Throws ParseError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

// File split on '\n' with trailing '\r' stripped; a trailing newline
// does not produce an extra empty line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<std::string> split_lines(std::string_view text);
std::string join_lines(const std::vector<std::string>& lines);

// Writes to a sibling temp file, then renames into place, so readers
// never observe a half-written file.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

void ensure_dir(const std::filesystem::path& dir);

}  // namespace codehand::io
