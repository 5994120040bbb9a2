#pragma once

#include <string>
#include <string_view>

namespace thematic {

/// Snowball English ("Porter2") stemmer, following the current published
/// Snowball english.sbl rules, including its exception lists and the
/// gener/commun/arsen/past/univers/later/emerg/organ/inter R1 prefixes.
/// Input is expected to be lowercase; characters other than a-z, y and the
/// apostrophe are treated as consonants.
std::u32string stem(std::u32string_view word);

// UTF-8 convenience overload.
std::string stem(std::string_view word);

}  // namespace thematic
