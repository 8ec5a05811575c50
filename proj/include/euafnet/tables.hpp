#pragma once

#include <string>

namespace euafnet {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Writes content to a sibling temporary file and renames it into place, so a
// reader never observes a half-written file.  Parent directories are created
// as needed.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace euafnet
