#include "thematic/preprocess.hpp"

#include <fstream>

#include "json.hpp"
#include "thematic/digest.hpp"
#include "thematic/error.hpp"
#include "thematic/stemmer.hpp"
#include "thematic/stopwords.hpp"
#include "thematic/text.hpp"

namespace thematic {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kEncodedFormat = "thematic.encoded_corpus";
constexpr int kEncodedVersion = 1;

void check_config(const PreprocessConfig& config) {
  if (config.min_token_length < 1) throw UsageError("min_token_length must be at least 1");
  if (config.stopword_list_id != kStopwordListId) {
    throw UsageError("unknown stopword list '" + config.stopword_list_id + "' (bundled: " +
                     std::string(kStopwordListId) + ")");
  }
}

}  // namespace

std::string config_digest(const PreprocessConfig& config) {
  return Sha256()
      .field("thematic.preprocess.v1")
      .field(config.stopword_list_id)
      .field(std::to_string(config.min_token_length))
      .field(config.keep_numerals ? "1" : "0")
      .hex();
}

TermId Vocabulary::intern(std::string_view term) {
  const auto [it, inserted] = index_.try_emplace(std::string(term), static_cast<TermId>(terms_.size()));
  if (inserted) terms_.emplace_back(term);
  return it->second;
}

TermId Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  return it == index_.end() ? static_cast<TermId>(terms_.size()) : it->second;
}

Vocabulary Vocabulary::from_terms(std::vector<std::string> terms) {
  Vocabulary v;
  for (auto& t : terms) {
    if (v.intern(t) != v.size() - 1) throw DataError("duplicate vocabulary term '" + t + "'");
  }
  return v;
}

std::vector<std::string> normalize(std::string_view raw, const PreprocessConfig& config) {
  check_config(config);
  const auto min_len = static_cast<std::size_t>(config.min_token_length);
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (current.size() >= min_len) tokens.push_back(text::encode_utf8(current));
    current.clear();
  };
  for (char32_t c : text::decode_utf8(raw)) {
    if (text::is_letter(c) || (config.keep_numerals && text::is_digit(c))) {
      current.push_back(text::fold_case(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

EncodedCorpus preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config) {
  check_config(config);
  if (corpus.documents.empty()) throw DataError("cannot preprocess an empty corpus");
  EncodedCorpus out;
  out.config_digest = config_digest(config);
  out.stopword_checksum = stopword_checksum();
  std::unordered_map<std::string, std::string> stems;
  for (const auto& doc : corpus.documents) {
    EncodedDocument enc{doc.id, {}};
    for (const auto& token : normalize(doc.text, config)) {
      if (is_stopword(token)) continue;
      auto it = stems.find(token);
      if (it == stems.end()) it = stems.emplace(token, stem(std::string_view(token))).first;
      enc.tokens.push_back(out.vocabulary.intern(it->second));
    }
    if (enc.tokens.empty()) {
      ++out.dropped_count;
      continue;
    }
    out.total_tokens += enc.tokens.size();
    out.docs.push_back(std::move(enc));
  }
  if (out.docs.empty()) throw DataError("every document is empty after preprocessing");
  return out;
}

std::vector<std::vector<std::string>> decode(const EncodedCorpus& corpus) {
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.docs.size());
  for (const auto& d : corpus.docs) {
    auto& terms = out.emplace_back();
    terms.reserve(d.tokens.size());
    for (auto id : d.tokens) terms.push_back(corpus.vocabulary.term(id));
  }
  return out;
}

void validate(const EncodedCorpus& corpus) {
  const auto v = corpus.vocab_size();
  std::size_t total = 0;
  for (const auto& d : corpus.docs) {
    if (d.tokens.empty()) throw InvariantError("encoded document '" + d.id + "' is empty");
    for (auto id : d.tokens) {
      if (id >= v) throw InvariantError("token id out of range in document '" + d.id + "'");
    }
    total += d.tokens.size();
  }
  if (total != corpus.total_tokens) throw InvariantError("total_tokens does not match document lengths");
}

std::string encoded_corpus_digest(const EncodedCorpus& corpus) {
  Sha256 h;
  h.field(kEncodedFormat);
  for (const auto& t : corpus.vocabulary.terms()) h.field(t);
  for (const auto& d : corpus.docs) {
    h.field(d.id);
    std::string bytes;
    bytes.reserve(4 * d.tokens.size());
    for (auto id : d.tokens) {
      for (int s = 0; s < 32; s += 8) bytes.push_back(static_cast<char>((id >> s) & 0xff));
    }
    h.field(bytes);
  }
  return h.hex();
}

void save_encoded_corpus(const EncodedCorpus& corpus, const fs::path& path) {
  ordered_json j;
  j["format"] = kEncodedFormat;
  j["version"] = kEncodedVersion;
  j["V"] = corpus.vocab_size();
  j["D"] = corpus.num_docs();
  j["total_tokens"] = corpus.total_tokens;
  j["dropped_count"] = corpus.dropped_count;
  j["config_digest"] = corpus.config_digest;
  j["stopword_checksum"] = corpus.stopword_checksum;
  j["vocabulary"] = corpus.vocabulary.terms();
  auto& docs = j["documents"] = ordered_json::array();
  for (const auto& d : corpus.docs) docs.push_back({{"id", d.id}, {"tokens", d.tokens}});
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump() << '\n';
  if (!out) throw DataError("error while writing '" + path.string() + "'");
}

EncodedCorpus load_encoded_corpus(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read encoded corpus '" + path.string() + "'");
  EncodedCorpus c;
  try {
    const auto j = ordered_json::parse(in);
    if (j.at("format") != kEncodedFormat) throw DataError("'" + path.string() + "' is not an encoded corpus");
    if (j.at("version") != kEncodedVersion) {
      throw DataError("unsupported encoded corpus version " + j.at("version").dump());
    }
    c.vocabulary = Vocabulary::from_terms(j.at("vocabulary").get<std::vector<std::string>>());
    c.total_tokens = j.at("total_tokens").get<std::size_t>();
    c.dropped_count = j.at("dropped_count").get<std::size_t>();
    c.config_digest = j.at("config_digest").get<std::string>();
    c.stopword_checksum = j.at("stopword_checksum").get<std::string>();
    for (const auto& d : j.at("documents")) {
      c.docs.push_back({d.at("id").get<std::string>(), d.at("tokens").get<std::vector<TermId>>()});
    }
    if (j.at("V").get<std::size_t>() != c.vocab_size() || j.at("D").get<std::size_t>() != c.num_docs()) {
      throw DataError("encoded corpus header disagrees with its contents");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed encoded corpus '" + path.string() + "': " + e.what());
  }
  try {
    validate(c);
  } catch (const InvariantError& e) {
    throw DataError(std::string("inconsistent encoded corpus: ") + e.what());
  }
  return c;
}

}  // namespace thematic
