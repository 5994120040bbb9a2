#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "thematic/digest.hpp"
#include "thematic/error.hpp"
#include "thematic/preprocess.hpp"
#include "thematic/stemmer.hpp"
#include "thematic/stopwords.hpp"

using namespace thematic;
using thematic::testing::TempDir;
using Tokens = std::vector<std::string>;

namespace {

Corpus toy() {
  std::vector<RawDocument> docs;
  for (const char* s : thematic::testing::kToySentences) docs.push_back({"", s});
  return make_corpus(std::move(docs));
}

}  // namespace

TEST_CASE("normalize") {
  CHECK(normalize("I like to eat kippers for breakfast.") ==
        Tokens{"like", "to", "eat", "kippers", "for", "breakfast"});
  CHECK(normalize("").empty());
  CHECK(normalize("Web 2.0!!") == Tokens{"web"});

  PreprocessConfig numerals;
  numerals.keep_numerals = true;
  CHECK(normalize("Web 2.0!! in 2019", numerals) == Tokens{"web", "in", "2019"});

  PreprocessConfig one;
  one.min_token_length = 1;
  CHECK(normalize("I a b-c", one) == Tokens{"i", "a", "b", "c"});

  // Apostrophes split; case folding applies beyond ASCII.
  CHECK(normalize("Don't STRASSE Ärger") == Tokens{"don", "strasse", "ärger"});
  CHECK(normalize("naïve café") == Tokens{"naïve", "café"});
}

TEST_CASE("bundled stopword list is frozen") {
  CHECK(kStopwordListId == "snowball-en-120");
  CHECK(english_stopwords().size() == 120);
  CHECK(stopword_checksum() == "7b967d513eadfd9ccb235b4e56ca3d10f75b6ef12df24ad6d70a2f491726804e");
  CHECK(sha256_file(std::string(THEMATIC_SOURCE_DIR) + "/data/stopwords-en.txt") == stopword_checksum());
  for (const char* w : {"i", "me", "my", "to", "for", "too", "the", "and", "but", "all", "are"}) {
    CHECK_MESSAGE(is_stopword(w), w);
  }
  // These survive because their stems appear in the published topic tables.
  for (const char* w : {"because", "only", "why", "very", "like", "kitten"}) CHECK_FALSE(is_stopword(w));
}

TEST_CASE("toy corpus encoding") {
  const auto e = preprocess_corpus(toy());
  REQUIRE(e.num_docs() == 3);
  const auto streams = decode(e);
  CHECK(streams[0] == Tokens{"like", "eat", "kipper", "breakfast"});
  CHECK(streams[1] == Tokens{"love", "anim", "kitten", "cutest"});
  CHECK(streams[2] == Tokens{"kitten", "eat", "kipper"});
  CHECK(e.total_tokens == 11);
  CHECK(e.vocab_size() == 8);
  // First-occurrence ids: the shared term keeps one id.
  CHECK(e.docs[0].tokens[2] == e.docs[2].tokens[2]);
  CHECK(e.vocabulary.find("kipper") == 2);
  CHECK(e.vocabulary.find("nope") == e.vocab_size());
  CHECK(e.stopword_checksum == stopword_checksum());
  CHECK(e.config_digest == config_digest(PreprocessConfig{}));
  validate(e);
}

TEST_CASE("documents left empty are dropped and counted") {
  const auto c = make_corpus({{"a", "the and of it"}, {"b", "kippers"}, {"c", "!!! 42"}});
  const auto e = preprocess_corpus(c);
  REQUIRE(e.num_docs() == 1);
  CHECK(e.docs[0].id == "b");
  CHECK(e.dropped_count == 2);
  CHECK_THROWS_AS(preprocess_corpus(make_corpus({{"a", "the of"}})), DataError);
  CHECK_THROWS_AS(preprocess_corpus(Corpus{}), DataError);

  PreprocessConfig bad;
  bad.min_token_length = 0;
  CHECK_THROWS_AS(preprocess_corpus(c, bad), UsageError);
  bad = {};
  bad.stopword_list_id = "other";
  CHECK_THROWS_AS(preprocess_corpus(c, bad), UsageError);
}

TEST_CASE("stopwords are removed before stemming") {
  // "doing" is a stopword, "does" too; "dos" is not, and stems differently.
  const auto e = preprocess_corpus(make_corpus({{"a", "doing does having ours dos"}}));
  CHECK(decode(e)[0] == Tokens{"dos"});

  // No stopword stem appears unless some non-stopword produced it.
  const auto c = make_corpus({{"a", "He was being himself in having the ours and theirs"},
                              {"b", "Beings were haves of some sort, ourselves aside"}});
  const auto enc = preprocess_corpus(c);
  std::set<std::string> produced;
  for (const auto& doc : c.documents) {
    for (const auto& tok : normalize(doc.text)) {
      if (!is_stopword(tok)) produced.insert(stem(tok));
    }
  }
  for (const auto& stream : decode(enc)) {
    for (const auto& term : stream) CHECK(produced.count(term) == 1);
  }
}

TEST_CASE("decoding reproduces the stemmed streams") {
  const auto c = make_corpus({{"x", "Running runners ran quickly; the quick runner runs."},
                              {"y", "Generously generous generation of organizations"},
                              {"z", "Cats, cat's and catty cats"}});
  const auto e = preprocess_corpus(c);
  REQUIRE(e.num_docs() == 3);
  for (std::size_t d = 0; d < 3; ++d) {
    Tokens expected;
    for (const auto& tok : normalize(c.documents[d].text)) {
      if (!is_stopword(tok)) expected.push_back(stem(tok));
    }
    CHECK(decode(e)[d] == expected);
  }
}

TEST_CASE("encoding is deterministic and round-trips through a file") {
  TempDir dir("prep");
  const auto a = preprocess_corpus(toy());
  const auto b = preprocess_corpus(toy());
  CHECK(encoded_corpus_digest(a) == encoded_corpus_digest(b));
  CHECK(a.vocabulary.terms() == b.vocabulary.terms());

  save_encoded_corpus(a, dir / "enc.json");
  const auto back = load_encoded_corpus(dir / "enc.json");
  CHECK(encoded_corpus_digest(back) == encoded_corpus_digest(a));
  CHECK(back.vocabulary.terms() == a.vocabulary.terms());
  CHECK(back.total_tokens == a.total_tokens);
  CHECK(back.config_digest == a.config_digest);
  CHECK(back.stopword_checksum == a.stopword_checksum);
  for (std::size_t d = 0; d < a.num_docs(); ++d) {
    CHECK(back.docs[d].id == a.docs[d].id);
    CHECK(back.docs[d].tokens == a.docs[d].tokens);
  }
  save_encoded_corpus(back, dir / "enc2.json");
  CHECK(sha256_file(dir / "enc.json") == sha256_file(dir / "enc2.json"));
}

TEST_CASE("corrupt encoded corpus files are rejected") {
  TempDir dir("prep");
  save_encoded_corpus(preprocess_corpus(toy()), dir / "enc.json");
  std::ifstream in(dir / "enc.json");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  auto write = [&](const std::string& s) {
    std::ofstream(dir / "bad.json", std::ios::binary) << s;
    return dir / "bad.json";
  };
  CHECK_THROWS_AS(load_encoded_corpus(write("{")), DataError);
  CHECK_THROWS_AS(load_encoded_corpus(write(text.substr(0, text.size() / 2))), DataError);
  std::string wrong_version = text;
  wrong_version.replace(wrong_version.find("\"version\":1"), 11, "\"version\":9");
  CHECK_THROWS_AS(load_encoded_corpus(write(wrong_version)), DataError);
  CHECK_THROWS_AS(load_encoded_corpus(dir / "absent.json"), DataError);
}
