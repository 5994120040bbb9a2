#include "thematic/corpus.hpp"

#include <algorithm>
#include <fstream>
#include "json.hpp"
#include <unordered_set>

#include "thematic/digest.hpp"
#include "thematic/error.hpp"
#include "thematic/stopwords.hpp"
#include "thematic/text.hpp"

namespace thematic {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(SourceFormat format) {
  return format == SourceFormat::jsonl ? "jsonl" : "plaintext_dir";
}

SourceFormat parse_source_format(const std::string& name) {
  if (name == "jsonl") return SourceFormat::jsonl;
  if (name == "plaintext_dir" || name == "plaintext") return SourceFormat::plaintext_dir;
  throw UsageError("unknown corpus format '" + name + "' (expected jsonl or plaintext_dir)");
}

namespace {

void check_unique_ids(const std::vector<RawDocument>& docs) {
  std::unordered_set<std::string_view> seen;
  for (const auto& d : docs) {
    if (!seen.insert(d.id).second) throw DataError("duplicate document id '" + d.id + "'");
  }
}

std::vector<RawDocument> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read corpus file '" + path.string() + "'");
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw DataError(where + ": expected a JSON object");
    const auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) throw DataError(where + ": missing string field \"text\"");
    RawDocument doc;
    doc.text = text->get<std::string>();
    doc.source = SourceFormat::jsonl;
    if (const auto id = obj.find("id"); id != obj.end() && !id->is_null()) {
      if (!id->is_string()) throw DataError(where + ": field \"id\" must be a string");
      doc.id = id->get<std::string>();
    } else {
      doc.id = std::to_string(docs.size());
    }
    docs.push_back(std::move(doc));
  }
  if (in.bad()) throw DataError("error while reading '" + path.string() + "'");
  return docs;
}

std::vector<RawDocument> read_plaintext_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DataError("'" + dir.string() + "' is not a readable directory");
  std::vector<fs::path> files;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    const auto name = it->path().filename().string();
    if (it->is_regular_file() && !name.starts_with(".")) files.push_back(it->path());
  }
  if (ec) throw DataError("cannot list '" + dir.string() + "': " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  std::vector<RawDocument> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw DataError("cannot read '" + f.string() + "'");
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    docs.push_back({f.stem().string(), std::move(body), SourceFormat::plaintext_dir});
  }
  return docs;
}

}  // namespace

Corpus ingest(const fs::path& path, SourceFormat format) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw DataError("corpus path '" + path.string() + "' does not exist");
  Corpus corpus;
  corpus.documents = format == SourceFormat::jsonl ? read_jsonl(path) : read_plaintext_dir(path);
  if (corpus.documents.empty()) throw DataError("corpus '" + path.string() + "' contains no documents");
  check_unique_ids(corpus.documents);
  corpus.provenance.path = path;
  corpus.provenance.format = format;
  corpus.provenance.input_count = corpus.documents.size();
  return corpus;
}

Corpus make_corpus(std::vector<RawDocument> documents) {
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (documents[i].id.empty()) documents[i].id = std::to_string(i);
  }
  check_unique_ids(documents);
  Corpus corpus;
  corpus.provenance.input_count = documents.size();
  corpus.documents = std::move(documents);
  return corpus;
}

double stopword_ratio(const std::string& raw) {
  const auto words = text::split_whitespace(text::decode_utf8(raw));
  if (words.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& w : words) {
    auto first = std::find_if(w.begin(), w.end(), text::is_letter);
    auto last = std::find_if(w.rbegin(), w.rend(), text::is_letter).base();
    if (first >= last) continue;
    const auto folded = text::encode_utf8(text::fold_case(std::u32string_view(&*first, last - first)));
    if (is_stopword(folded)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(words.size());
}

Corpus filter_english(const Corpus& corpus, double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw UsageError("english ratio must lie in [0, 1]");
  Corpus out;
  out.provenance = corpus.provenance;
  out.provenance.english_ratio = ratio;
  for (const auto& doc : corpus.documents) {
    if (text::count_whitespace_words(doc.text) > 0 && stopword_ratio(doc.text) >= ratio) {
      out.documents.push_back(doc);
    } else {
      ++out.provenance.dropped_count;
    }
  }
  return out;
}

CorpusStats stats(const Corpus& corpus) {
  CorpusStats s;
  s.doc_count = corpus.documents.size();
  for (const auto& d : corpus.documents) s.token_count += text::count_whitespace_words(d.text);
  s.dropped_count = corpus.provenance.dropped_count;
  return s;
}

std::string corpus_digest(const Corpus& corpus) {
  Sha256 h;
  h.field("thematic.corpus.v1");
  for (const auto& d : corpus.documents) h.field(d.id).field(d.text);
  return h.hex();
}

void write_jsonl(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (const auto& d : corpus.documents) {
    out << json{{"id", d.id}, {"text", d.text}}.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
  if (!out) throw DataError("error while writing '" + path.string() + "'");
}

}  // namespace thematic
