#pragma once

#include <string>
#include <string_view>
#include <vector>

// Unicode helpers shared by corpus and preprocess. Invalid UTF-8 decodes to
// U+FFFD, which is neither a letter, a digit nor whitespace.
namespace thematic::text {

std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);

bool is_letter(char32_t c);
bool is_digit(char32_t c);
bool is_space(char32_t c);
// Unicode simple case folding (one code point to one code point).
char32_t fold_case(char32_t c);
std::u32string fold_case(std::u32string_view text);

// Whitespace-delimited words, untouched otherwise.
std::vector<std::u32string> split_whitespace(std::u32string_view text);
std::size_t count_whitespace_words(std::string_view utf8);

}  // namespace thematic::text
