#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "thematic/corpus.hpp"

namespace thematic {

using TermId = std::uint32_t;

struct PreprocessConfig {
  std::string stopword_list_id{"snowball-en-120"};
  int min_token_length = 2;
  bool keep_numerals = false;
};

// Stable digest of the settings, recorded in encoded-corpus headers.
std::string config_digest(const PreprocessConfig& config);

/// Dense term <-> id bijection. Ids are assigned in first-occurrence order.
class Vocabulary {
 public:
  TermId intern(std::string_view term);
  // Returns size() when the term is unknown.
  TermId find(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  static Vocabulary from_terms(std::vector<std::string> terms);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> index_;
};

struct EncodedDocument {
  std::string id;
  std::vector<TermId> tokens;
};

struct EncodedCorpus {
  std::vector<EncodedDocument> docs;
  Vocabulary vocabulary;
  std::size_t total_tokens = 0;
  std::size_t dropped_count = 0;  // documents with no surviving tokens
  std::string config_digest;
  std::string stopword_checksum;

  std::size_t num_docs() const { return docs.size(); }
  std::size_t vocab_size() const { return vocabulary.size(); }
};

/// Lowercases (simple case folding), splits on every character that is not a
/// letter (or digit, with keep_numerals) and drops tokens shorter than
/// min_token_length code points.
std::vector<std::string> normalize(std::string_view text, const PreprocessConfig& config = {});

/// normalize -> drop stopwords -> stem -> encode, per document in corpus order.
/// Documents left without tokens are dropped and counted. Throws DataError when
/// nothing survives.
EncodedCorpus preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config = {});

// Term streams reconstructed through the vocabulary.
std::vector<std::vector<std::string>> decode(const EncodedCorpus& corpus);

// Checks the id/length invariants; throws InvariantError.
void validate(const EncodedCorpus& corpus);

std::string encoded_corpus_digest(const EncodedCorpus& corpus);

// Versioned JSON file: header fields, vocabulary array, per-document id arrays.
void save_encoded_corpus(const EncodedCorpus& corpus, const std::filesystem::path& path);
EncodedCorpus load_encoded_corpus(const std::filesystem::path& path);

}  // namespace thematic
