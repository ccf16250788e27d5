#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace colorlit::text {

// ASCII-only case folding; non-ASCII bytes pass through untouched.
std::string to_lower(std::string_view s);
bool is_lower(std::string_view s);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
// Splits on runs of ASCII whitespace, dropping empty fields.
std::vector<std::string_view> split_ws(std::string_view s);

bool contains(std::string_view haystack, std::string_view needle);

// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view s);

// Reads a whole file; throws IoError naming the path.
std::string read_file(const std::string& path);

// Writes via a sibling temp file and rename so readers never observe a
// partial file.
void write_file_atomic(const std::string& path, std::string_view contents);

// printf-style "%#.6g" with -0 folded to 0.
std::string format_sig6(double v);

}  // namespace colorlit::text
