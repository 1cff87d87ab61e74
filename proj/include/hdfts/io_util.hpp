#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdfts::io {

// Shortest decimal representation that round-trips to the same double.
// Keeps CSV output canonical: write -> read -> write is byte-identical.
std::string format_double(double x);

// Strict full-field numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

// Split one CSV line on commas. No quoting support: fields in the formats
// used here never contain commas.
std::vector<std::string_view> split_line(std::string_view line);

// Strip a trailing '\r' (files written on Windows).
std::string_view strip_cr(std::string_view line);

}  // namespace hdfts::io
