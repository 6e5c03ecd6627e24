#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seatri {

// Shortest round-trip decimal form of a double. All file writers go through
// this so that parse -> serialize is byte-stable.
std::string format_double(double v);

std::string format_int(long long v);

// Parses a double; the literal token "NaN" (any case) yields a quiet NaN.
// Returns nullopt on malformed input.
std::optional<double> parse_double(std::string_view s);

std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);

// Splits on a delimiter, trimming each field. Empty fields are kept.
std::vector<std::string_view> split(std::string_view s, char delim);

// Reads a whole text file; throws std::runtime_error if it cannot be opened.
std::string read_text_file(const std::string& path);

void write_text_file(const std::string& path, std::string_view content);

} // namespace seatri
