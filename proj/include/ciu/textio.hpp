#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace ciu {

std::vector<std::string> split(std::string_view line, char sep);
std::string strip(std::string_view s);
std::string lower_ascii(std::string_view s);

// Strict integer parsing; throws ValidationError on junk.
long parse_long(std::string_view field, std::string_view what);
double parse_double(std::string_view field, std::string_view what);

// Fixed decimal / full precision formatting. All report files go through
// these two so bytes are stable for a given build.
std::string fmt_fixed(double v, int decimals);
std::string fmt_full(double v);
// Exact round-trip encoding used by model files.
std::string fmt_hex(double v);
double parse_hex_double(std::string_view field);

std::vector<std::string> read_lines(const std::string& path);
void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace ciu
