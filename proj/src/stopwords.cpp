#include "thematic/stopwords.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "thematic/digest.hpp"

namespace thematic {

namespace {

// Classic Snowball English list without the apostrophe forms (normalisation
// splits on apostrophes, so they never match) and without because/only/why/very.
constexpr std::array<std::string_view, 120> kWords = {
    "i",
    "me",
    "my",
    "myself",
    "we",
    "our",
    "ours",
    "ourselves",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
    "he",
    "him",
    "his",
    "himself",
    "she",
    "her",
    "hers",
    "herself",
    "it",
    "its",
    "itself",
    "they",
    "them",
    "their",
    "theirs",
    "themselves",
    "what",
    "which",
    "who",
    "whom",
    "this",
    "that",
    "these",
    "those",
    "am",
    "is",
    "are",
    "was",
    "were",
    "be",
    "been",
    "being",
    "have",
    "has",
    "had",
    "having",
    "do",
    "does",
    "did",
    "doing",
    "would",
    "should",
    "could",
    "ought",
    "cannot",
    "a",
    "an",
    "the",
    "and",
    "but",
    "if",
    "or",
    "as",
    "until",
    "while",
    "of",
    "at",
    "by",
    "for",
    "with",
    "about",
    "against",
    "between",
    "into",
    "through",
    "during",
    "before",
    "after",
    "above",
    "below",
    "to",
    "from",
    "up",
    "down",
    "in",
    "out",
    "on",
    "off",
    "over",
    "under",
    "again",
    "further",
    "then",
    "once",
    "here",
    "there",
    "when",
    "where",
    "how",
    "all",
    "any",
    "both",
    "each",
    "few",
    "more",
    "most",
    "other",
    "some",
    "such",
    "no",
    "nor",
    "not",
    "own",
    "same",
    "so",
    "than",
    "too",
};

const std::unordered_set<std::string_view>& lookup() {
  static const std::unordered_set<std::string_view> set(kWords.begin(), kWords.end());
  return set;
}

}  // namespace

std::span<const std::string_view> english_stopwords() { return kWords; }

bool is_stopword(std::string_view folded_token) { return lookup().contains(folded_token); }

const std::string& stopword_checksum() {
  static const std::string checksum = [] {
    Sha256 h;
    for (auto w : kWords) h.update(w).update("\n");
    return h.hex();
  }();
  return checksum;
}

}  // namespace thematic
