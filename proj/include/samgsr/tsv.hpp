#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace samgsr {

// Splits on a single delimiter; empty fields are preserved.
std::vector<std::string> split(const std::string& line, char delim);

// Parses a full double; throws io_error with context on trailing garbage.
double parse_double(const std::string& token, const std::string& context);

// Reads a text file line by line, tolerating a final line without '\n' and
// stripping a trailing '\r'.  Throws io_error when the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

// FNV-1a 64-bit over the raw bytes of a file; used for manifest input digests.
uint64_t file_digest(const std::string& path);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

}  // namespace samgsr
