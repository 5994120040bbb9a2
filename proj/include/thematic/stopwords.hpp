#pragma once

#include <span>
#include <string>
#include <string_view>

namespace thematic {

// Identifier of the bundled list, recorded in encoded-corpus headers.
inline constexpr std::string_view kStopwordListId = "snowball-en-120";

// The bundled list, in file order (same bytes as data/stopwords-en.txt).
std::span<const std::string_view> english_stopwords();

bool is_stopword(std::string_view folded_token);

// SHA-256 of the list serialised one word per line with a trailing newline.
const std::string& stopword_checksum();

}  // namespace thematic
