#include "thematic/stemmer.hpp"

#include <algorithm>
#include <span>

#include "thematic/text.hpp"

namespace thematic {

namespace {

using Word = std::u32string;
using View = std::u32string_view;

struct Rule {
  View suffix;
  int action;
};

bool is_vowel(char32_t c) {
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' || c == U'y';
}

// Vowels plus w, x and the consonant marker Y: the letters that may not close a
// short syllable.
bool is_vowel_wxy(char32_t c) { return is_vowel(c) || c == U'w' || c == U'x' || c == U'Y'; }

bool is_valid_li(char32_t c) {
  return c == U'c' || c == U'd' || c == U'e' || c == U'g' || c == U'h' || c == U'k' || c == U'm' ||
         c == U'n' || c == U'r' || c == U't';
}

bool ends_with(View w, std::size_t end, View suffix) {
  return end >= suffix.size() && w.substr(end - suffix.size(), suffix.size()) == suffix;
}

// Longest rule whose suffix ends at `end`; Snowball never falls back to a
// shorter match when the longest one's condition fails.
const Rule* longest_suffix(View w, std::size_t end, std::span<const Rule> rules) {
  const Rule* best = nullptr;
  for (const auto& r : rules) {
    if (ends_with(w, end, r.suffix) && (best == nullptr || r.suffix.size() > best->suffix.size())) {
      best = &r;
    }
  }
  return best;
}

constexpr Rule kExceptions[] = {
    {U"andes", 0},  {U"atlas", 0},  {U"bias", 0},   {U"cosmos", 0}, {U"early", 6},
    {U"gently", 4}, {U"howe", 0},   {U"idly", 3},   {U"news", 0},   {U"only", 7},
    {U"singly", 8}, {U"skies", 2},  {U"skis", 1},   {U"sky", 0},    {U"ugly", 5},
};
constexpr View kExceptionForms[] = {U"ski", U"sky", U"idl", U"gentl", U"ugli", U"earli", U"onli", U"singl"};

constexpr View kRegionPrefixes[] = {U"arsen", U"commun", U"emerg", U"gener", U"inter",
                                    U"later", U"organ", U"past",  U"univers"};

constexpr Rule kApostrophe[] = {{U"'", 1}, {U"'s'", 1}, {U"'s", 1}};
constexpr Rule kStep1a[] = {{U"ied", 2}, {U"s", 3}, {U"ies", 2}, {U"sses", 1}, {U"ss", 0}, {U"us", 0}};
constexpr Rule kStep1bSuffix[] = {{U"", 0},     {U"ed", 2},    {U"eed", 1},  {U"ing", 3},
                                  {U"edly", 2}, {U"eedly", 1}, {U"ingly", 2}};
constexpr View kEedExceptions[] = {U"succ", U"proc", U"exc"};
constexpr Rule kIngStem[] = {{U"even", 2}, {U"cann", 2}, {U"inn", 2}, {U"earr", 2},
                             {U"herr", 2}, {U"out", 2},  {U"y", 1}};
constexpr Rule kStep1bTail[] = {{U"", 3},  {U"bb", 2}, {U"dd", 2}, {U"ff", 2}, {U"gg", 2},
                                {U"bl", 1}, {U"mm", 2}, {U"nn", 2}, {U"pp", 2}, {U"rr", 2},
                                {U"at", 1}, {U"tt", 2}, {U"iz", 1}};
constexpr Rule kStep2[] = {
    {U"anci", 3},    {U"enci", 2},     {U"ogi", 14},     {U"li", 16},      {U"bli", 12},
    {U"abli", 4},    {U"alli", 8},     {U"fulli", 9},    {U"lessli", 15},  {U"ousli", 10},
    {U"entli", 5},   {U"aliti", 8},    {U"biliti", 12},  {U"iviti", 11},   {U"tional", 1},
    {U"ational", 7}, {U"alism", 8},    {U"ation", 7},    {U"ization", 6},  {U"izer", 6},
    {U"ator", 7},    {U"iveness", 11}, {U"fulness", 9},  {U"ousness", 10}, {U"ogist", 13},
};
constexpr View kStep2Replacement[] = {U"",    U"tion", U"ence", U"ance", U"able", U"ent", U"ize", U"ate",
                                      U"al",  U"ful",  U"ous",  U"ive",  U"ble",  U"og",  U"og",  U"less"};
constexpr Rule kStep3[] = {{U"icate", 4}, {U"ative", 6},  {U"alize", 3}, {U"iciti", 4}, {U"ical", 4},
                           {U"tional", 1}, {U"ational", 2}, {U"ful", 5},   {U"ness", 5}};
constexpr Rule kStep4[] = {{U"ic", 1},  {U"ance", 1}, {U"ence", 1}, {U"able", 1}, {U"ible", 1}, {U"ate", 1},
                           {U"ive", 1}, {U"ize", 1},  {U"iti", 1},  {U"al", 1},   {U"ism", 1},  {U"ion", 2},
                           {U"er", 1},  {U"ous", 1},  {U"ant", 1},  {U"ent", 1},  {U"ment", 1}, {U"ement", 1}};

class EnglishStemmer {
 public:
  explicit EnglishStemmer(View word) : w_(word) {}

  Word run() {
    for (const auto& e : kExceptions) {
      if (w_ == e.suffix) return e.action == 0 ? w_ : Word(kExceptionForms[e.action - 1]);
    }
    if (w_.size() < 3) return w_;
    prelude();
    mark_regions();
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5();
    if (y_found_) std::replace(w_.begin(), w_.end(), U'Y', U'y');
    return w_;
  }

 private:
  void prelude() {
    if (!w_.empty() && w_.front() == U'\'') w_.erase(0, 1);
    if (!w_.empty() && w_.front() == U'y') {
      w_.front() = U'Y';
      y_found_ = true;
    }
    for (std::size_t i = 1; i < w_.size(); ++i) {
      if (w_[i] == U'y' && is_vowel(w_[i - 1])) {
        w_[i] = U'Y';
        y_found_ = true;
      }
    }
  }

  // Position just past the first non-vowel that follows a vowel, at or after `from`.
  std::size_t region_start(std::size_t from) const {
    std::size_t i = from;
    while (i < w_.size() && !is_vowel(w_[i])) ++i;
    if (i == w_.size()) return w_.size();
    while (i < w_.size() && is_vowel(w_[i])) ++i;
    if (i == w_.size()) return w_.size();
    return i + 1;
  }

  void mark_regions() {
    const View w = w_;
    std::size_t prefix = 0;
    for (auto p : kRegionPrefixes) {
      if (w.starts_with(p)) prefix = std::max(prefix, p.size());
    }
    p1_ = prefix > 0 ? prefix : region_start(0);
    p2_ = p1_ >= w_.size() ? w_.size() : region_start(p1_);
  }

  bool in_r1(std::size_t pos) const { return pos >= p1_; }
  bool in_r2(std::size_t pos) const { return pos >= p2_; }

  // Short syllable ending at `end`: consonant-vowel-consonant with the last
  // consonant not w, x or Y; or vowel-consonant at the start of the word; or
  // a word part ending in "past".
  bool short_syllable(std::size_t end) const {
    if (end >= 3 && !is_vowel_wxy(w_[end - 1]) && is_vowel(w_[end - 2]) && !is_vowel(w_[end - 3])) {
      return true;
    }
    if (end == 2 && !is_vowel(w_[1]) && is_vowel(w_[0])) return true;
    return ends_with(w_, end, U"past");
  }

  bool has_vowel_before(std::size_t end) const {
    return std::any_of(w_.begin(), w_.begin() + static_cast<std::ptrdiff_t>(end), is_vowel);
  }

  void replace_tail(std::size_t from, View with) { w_.replace(from, w_.size() - from, with); }

  void step1a() {
    if (const Rule* r = longest_suffix(w_, w_.size(), kApostrophe)) {
      w_.resize(w_.size() - r->suffix.size());
    }
    const Rule* r = longest_suffix(w_, w_.size(), kStep1a);
    if (r == nullptr) return;
    const std::size_t start = w_.size() - r->suffix.size();
    switch (r->action) {
      case 1:
        replace_tail(start, U"ss");
        break;
      case 2:
        replace_tail(start, start >= 2 ? U"i" : U"ie");
        break;
      case 3:
        // The letter right before the s does not count.
        if (start >= 1 && has_vowel_before(start - 1)) w_.pop_back();
        break;
      default:
        break;
    }
  }

  void step1b() {
    const Rule* r = longest_suffix(w_, w_.size(), kStep1bSuffix);
    const std::size_t start = w_.size() - r->suffix.size();
    switch (r->action) {
      case 0:
        return;
      case 1: {
        if (!in_r1(start)) return;
        const View head = View(w_).substr(0, start);
        if (std::find(std::begin(kEedExceptions), std::end(kEedExceptions), head) != std::end(kEedExceptions)) {
          return;
        }
        replace_tail(start, U"ee");
        return;
      }
      case 3:
        if (const Rule* ing = longest_suffix(w_, start, kIngStem)) {
          const std::size_t stem_start = start - ing->suffix.size();
          if (ing->action == 1) {
            // dying -> die, lying -> lie
            if (stem_start == 1 && !is_vowel(w_[0])) {
              replace_tail(stem_start, U"ie");
              return;
            }
          } else if (stem_start == 0) {
            return;  // inning, outing, evening, ...
          }
        }
        break;
      default:
        break;
    }
    if (!has_vowel_before(start)) return;
    w_.resize(start);
    const Rule* tail = longest_suffix(w_, w_.size(), kStep1bTail);
    switch (tail->action) {
      case 1:
        w_.push_back(U'e');
        break;
      case 2: {
        const std::size_t dbl = w_.size() - 2;
        const bool keep = dbl == 1 && (w_[0] == U'a' || w_[0] == U'e' || w_[0] == U'o');
        if (!keep) w_.pop_back();
        break;
      }
      default:
        if (w_.size() == p1_ && short_syllable(w_.size())) w_.push_back(U'e');
        break;
    }
  }

  void step1c() {
    const std::size_t n = w_.size();
    if (n < 3 || (w_[n - 1] != U'y' && w_[n - 1] != U'Y')) return;
    if (is_vowel(w_[n - 2])) return;
    w_[n - 1] = U'i';
  }

  void step2() {
    const Rule* r = longest_suffix(w_, w_.size(), kStep2);
    if (r == nullptr) return;
    const std::size_t start = w_.size() - r->suffix.size();
    if (!in_r1(start)) return;
    switch (r->action) {
      case 14:
        if (start >= 1 && w_[start - 1] == U'l') replace_tail(start, U"og");
        return;
      case 16:
        if (start >= 1 && is_valid_li(w_[start - 1])) w_.resize(start);
        return;
      default:
        replace_tail(start, kStep2Replacement[r->action]);
    }
  }

  void step3() {
    const Rule* r = longest_suffix(w_, w_.size(), kStep3);
    if (r == nullptr) return;
    const std::size_t start = w_.size() - r->suffix.size();
    if (!in_r1(start)) return;
    switch (r->action) {
      case 1:
        replace_tail(start, U"tion");
        break;
      case 2:
        replace_tail(start, U"ate");
        break;
      case 3:
        replace_tail(start, U"al");
        break;
      case 4:
        replace_tail(start, U"ic");
        break;
      case 5:
        w_.resize(start);
        break;
      case 6:
        if (in_r2(start)) w_.resize(start);
        break;
      default:
        break;
    }
  }

  void step4() {
    const Rule* r = longest_suffix(w_, w_.size(), kStep4);
    if (r == nullptr) return;
    const std::size_t start = w_.size() - r->suffix.size();
    if (!in_r2(start)) return;
    if (r->action == 1) {
      w_.resize(start);
    } else if (start >= 1 && (w_[start - 1] == U's' || w_[start - 1] == U't')) {
      w_.resize(start);
    }
  }

  void step5() {
    if (w_.empty()) return;
    const std::size_t last = w_.size() - 1;
    if (w_[last] == U'e') {
      if (in_r2(last) || (in_r1(last) && !short_syllable(last))) w_.pop_back();
    } else if (w_[last] == U'l') {
      if (in_r2(last) && last >= 1 && w_[last - 1] == U'l') w_.pop_back();
    }
  }

  Word w_;
  std::size_t p1_ = 0;
  std::size_t p2_ = 0;
  bool y_found_ = false;
};

}  // namespace

std::u32string stem(std::u32string_view word) { return EnglishStemmer(word).run(); }

std::string stem(std::string_view word) { return text::encode_utf8(stem(text::decode_utf8(word))); }

}  // namespace thematic
