#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chronnet::csv {

// Minimal RFC 4180 field handling: comma separated, optional double quotes,
// "" as an escaped quote inside a quoted field. No embedded newlines.
std::vector<std::string> split_line(std::string_view line);

std::string quote_if_needed(std::string_view field);

// Reads one line, stripping a trailing '\r'. Returns false at end of stream.
bool read_line(std::istream& in, std::string& line);

// Shortest round-trip decimal representation.
std::string format_double(double v);

// Strict numeric parse of the whole field (surrounding blanks allowed).
bool parse_double(std::string_view field, double& out);
bool parse_int64(std::string_view field, long long& out);

}  // namespace chronnet::csv
