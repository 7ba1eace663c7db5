#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pgml::text {

/// Shortest text that round-trips a double exactly (17 significant digits).
std::string format_exact(double value);

/// Fixed 10-significant-digit rendering used for every emitted CSV.
std::string format_report(double value);

/// Parses the whole token as a double; no trailing garbage, no locale.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_integer(std::string_view token);

std::vector<std::string_view> split_lines(std::string_view content);
std::vector<std::string_view> split_whitespace(std::string_view line);
std::vector<std::string_view> split_char(std::string_view line, char separator);
std::string_view trim(std::string_view s);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace pgml::text
