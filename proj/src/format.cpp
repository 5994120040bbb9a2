#include "thematic/format.hpp"

#include <array>
#include <charconv>

#include "thematic/error.hpp"

namespace thematic {

std::string fixed6(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, 6);
  return {buf.data(), res.ptr};
}

std::string shortest(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), res.ptr};
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw DataError("not a number: '" + std::string(text) + "'");
  return v;
}

}  // namespace thematic
