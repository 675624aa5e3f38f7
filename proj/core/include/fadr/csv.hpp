#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fadr {

// Shortest round-trip decimal form (to_chars), locale-independent and
// byte-stable across runs; integers render without an exponent or
// trailing ".0".
std::string format_double(double value);

// Fields joined with commas and a trailing newline appended to `out`.
// Used with pre-formatted fields; none of our fields ever contain
// commas or quotes.
void append_row(std::string& out, const std::vector<std::string>& fields);

// Minimal reader for the comma-separated files this project emits and
// accepts: splits on commas, no quoting or escapes.
std::vector<std::string> split_csv_line(std::string_view line);

// Non-empty lines of `text`, with trailing '\r' stripped.
std::vector<std::string> split_lines(std::string_view text);

// Parses with full round-trip precision; throws std::invalid_argument
// on malformed numbers.
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

} // namespace fadr
