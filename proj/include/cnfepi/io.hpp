#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace cnfepi::io {

std::ifstream open_input(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so a failed
// run never leaves a partial output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

double parse_double(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

}  // namespace cnfepi::io
