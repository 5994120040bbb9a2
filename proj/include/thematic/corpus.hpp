#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace thematic {

enum class SourceFormat { jsonl, plaintext_dir };

std::string to_string(SourceFormat format);
SourceFormat parse_source_format(const std::string& name);

struct RawDocument {
  std::string id;
  std::string text;  // UTF-8
  SourceFormat source = SourceFormat::jsonl;
};

struct CorpusProvenance {
  std::filesystem::path path;
  SourceFormat format = SourceFormat::jsonl;
  std::optional<double> english_ratio;  // set once filter_english has run
  std::size_t input_count = 0;          // documents read by ingest
  std::size_t dropped_count = 0;        // documents removed by filters
};

// Documents keep input order; ids are unique.
struct Corpus {
  std::vector<RawDocument> documents;
  CorpusProvenance provenance;
};

struct CorpusStats {
  std::size_t doc_count = 0;
  std::size_t token_count = 0;  // whitespace-delimited words, before normalization
  std::size_t dropped_count = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

inline constexpr double kDefaultEnglishRatio = 0.2;

/// Reads a corpus. JSONL: one object per line with a required "text" string and
/// an optional "id" string; blank lines are skipped, missing ids become the
/// zero-based document ordinal. plaintext_dir: every regular file in the
/// directory is one document, taken in lexicographic filename order, id = file
/// stem. Throws DataError on unreadable input, malformed lines (with the line
/// number), duplicate ids or an empty result.
Corpus ingest(const std::filesystem::path& path, SourceFormat format);

// In-memory construction with the same id rules as ingest.
Corpus make_corpus(std::vector<RawDocument> documents);

/// Keeps documents whose share of whitespace tokens found in the bundled
/// English stopword list is at least `ratio`. Empty documents are dropped.
Corpus filter_english(const Corpus& corpus, double ratio = kDefaultEnglishRatio);

// Share of whitespace tokens (case folded, edge punctuation trimmed) that are stopwords.
double stopword_ratio(const std::string& text);

CorpusStats stats(const Corpus& corpus);

// Stable digest over ids and texts in order.
std::string corpus_digest(const Corpus& corpus);

// Canonical JSONL ({"id":..,"text":..} per line), readable by ingest.
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace thematic
