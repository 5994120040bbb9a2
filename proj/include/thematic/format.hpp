#pragma once

#include <string>
#include <string_view>

// Locale-independent number formatting for byte-stable exports.
namespace thematic {

// Fixed notation, 6 decimals.
std::string fixed6(double value);
// Shortest representation that parses back to the same double.
std::string shortest(double value);
// Throws DataError unless the whole string is a number.
double parse_double(std::string_view text);

}  // namespace thematic
