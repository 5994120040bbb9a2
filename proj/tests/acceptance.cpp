// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "graphs.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_support.hpp"
#include "thematic/community.hpp"
#include "thematic/corpus.hpp"
#include "thematic/digest.hpp"
#include "thematic/error.hpp"
#include "thematic/lda.hpp"
#include "thematic/pipeline.hpp"
#include "thematic/preprocess.hpp"
#include "thematic/report.hpp"
#include "thematic/stemmer.hpp"
#include "thematic/topicnet.hpp"

using namespace thematic;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes, fixed here.
constexpr double kStemmerSeconds = 1.0;
constexpr std::size_t kStemmerMinPairs = 10000;

constexpr double kGibbsMaxTv = 0.05;
constexpr int kGibbsSamples = 100000;
constexpr int kGibbsBurnIn = 1000;
constexpr double kGibbsSeconds = 30.0;

constexpr int kToySeeds = 10;
constexpr int kToyRequired = 8;
constexpr double kToyThetaTolerance = 0.15;
constexpr double kToySeconds = 5.0;

constexpr double kPlantedMaxTv = 0.15;
constexpr double kPlantedSeconds = 60.0;

constexpr int kFuzzCorpora = 100;
constexpr int kFuzzSweeps = 50;

constexpr double kGraphThreshold = 0.2;
constexpr int kMonotoneMatrices = 20;

constexpr double kLouvainRatio = 0.95;
constexpr double kBridgeQTolerance = 1e-9;

constexpr std::size_t kThroughputTokens = 3'200'000;
constexpr int kThroughputTopics = 20;
constexpr int kThroughputSweeps = 200;
constexpr double kThroughputSeconds = 600.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 ------------------------------------------------------------------------
Outcome stemmer_conformance() {
  std::ifstream in(std::string(THEMATIC_TEST_DATA_DIR) + "/snowball_en_voc.tsv");
  if (!in) return {false, "fixture missing"};
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  const auto start = Clock::now();
  std::size_t agree = 0;
  for (const auto& [word, expected] : pairs) agree += stem(word) == expected ? 1 : 0;
  const double elapsed = seconds_since(start);

  const std::map<std::string, std::string> table{{"because", "becaus"}, {"only", "onli"},     {"why", "whi"},
                                                 {"very", "veri"},      {"female", "femal"},  {"really", "realli"},
                                                 {"colleague", "colleagu"}, {"manager", "manag"},
                                                 {"harassment", "harass"}};
  std::size_t table_ok = 0;
  for (const auto& [word, expected] : table) table_ok += stem(word) == expected ? 1 : 0;

  const bool pass = pairs.size() >= kStemmerMinPairs && agree == pairs.size() && table_ok == table.size() &&
                    elapsed < kStemmerSeconds;
  return {pass, std::to_string(agree) + "/" + std::to_string(pairs.size()) + " fixture pairs, " +
                    std::to_string(table_ok) + "/" + std::to_string(table.size()) + " table stems, " +
                    fmt("%.3f s", elapsed)};
}

// 2 ------------------------------------------------------------------------
Outcome gibbs_exactness() {
  const oracle::Docs docs{{0, 0, 1}, {1, 2, 2}};
  const auto corpus = oracle::make_encoded(docs, 3);
  Hyperparams hp = default_hyperparams(2);
  hp.alpha = 0.1;
  hp.beta = 0.01;
  hp.seed = 2024;
  hp.iterations = kGibbsBurnIn + kGibbsSamples;
  hp.burn_in = kGibbsBurnIn;

  const auto exact = oracle::exact_posterior(docs, 2, 3, hp.alpha, hp.beta);
  const auto start = Clock::now();
  auto state = init(corpus, hp);
  for (int i = 0; i < kGibbsBurnIn; ++i) sweep(state, corpus, hp);
  std::vector<double> freq(exact.size(), 0.0);
  for (int i = 0; i < kGibbsSamples; ++i) {
    sweep(state, corpus, hp);
    freq[oracle::encode_assignment(state.z, 2)] += 1.0;
  }
  for (auto& f : freq) f /= kGibbsSamples;
  const double elapsed = seconds_since(start);
  const double tv = oracle::total_variation(freq, exact);
  return {tv <= kGibbsMaxTv && elapsed < kGibbsSeconds,
          "TV " + fmt("%.4f", tv) + " (limit " + fmt("%.2f", kGibbsMaxTv) + ") over " +
              std::to_string(kGibbsSamples) + " samples, " + fmt("%.2f s", elapsed)};
}

// 3 ------------------------------------------------------------------------
Outcome toy_separation() {
  std::vector<RawDocument> raw;
  for (const char* s : thematic::testing::kToySentences) raw.push_back({"", s});
  const auto corpus = preprocess_corpus(make_corpus(std::move(raw)));
  const std::set<std::string> food{"eat", "kipper", "breakfast"};
  const std::size_t mixed = 2;

  const auto start = Clock::now();
  int separated = 0;
  int theta_ok = 0;
  int both = 0;
  for (int seed = 1; seed <= kToySeeds; ++seed) {
    Hyperparams hp = default_hyperparams(2);
    hp.alpha = 0.1;
    hp.beta = 0.01;
    hp.seed = static_cast<std::uint64_t>(seed);
    const auto model = train(corpus, hp);
    const auto top = top_words(model, 3);
    std::optional<std::size_t> food_topic;
    for (std::size_t k = 0; k < 2; ++k) {
      std::set<std::string> terms;
      for (const auto& r : top[k]) terms.insert(r.term);
      if (terms == food) food_topic = k;
    }
    // Topic matching: the food topic when one exists, otherwise the topic holding "eat".
    std::size_t a = food_topic.value_or(0);
    if (!food_topic) {
      const auto eat = corpus.vocabulary.find("eat");
      a = model.phi(0, eat) >= model.phi(1, eat) ? 0 : 1;
    }
    const bool close = std::abs(model.theta(mixed, a) - 2.0 / 3.0) <= kToyThetaTolerance &&
                       std::abs(model.theta(mixed, 1 - a) - 1.0 / 3.0) <= kToyThetaTolerance;
    separated += food_topic ? 1 : 0;
    theta_ok += close ? 1 : 0;
    both += food_topic && close ? 1 : 0;
  }
  const double elapsed = seconds_since(start);
  return {both >= kToyRequired && elapsed < kToySeconds,
          std::to_string(both) + "/" + std::to_string(kToySeeds) + " seeds pass (top-3 = {eat,kipper,breakfast}: " +
              std::to_string(separated) + ", theta within " + fmt("%.2f", kToyThetaTolerance) + ": " +
              std::to_string(theta_ok) + "), need " + std::to_string(kToyRequired) + ", " + fmt("%.2f s", elapsed)};
}

// 4 ------------------------------------------------------------------------
Outcome planted_recovery() {
  const auto planted = oracle::generate_lda(5, 100, 500, 50, 0.1, 0.01, 20240501);
  const auto corpus = oracle::make_encoded(planted.docs, 100);
  Hyperparams hp = default_hyperparams(5);
  hp.alpha = 0.1;
  hp.beta = 0.01;
  hp.seed = 1;
  const auto start = Clock::now();
  const auto model = train(corpus, hp);
  const double elapsed = seconds_since(start);
  const auto match = oracle::best_matching(planted.phi, model.phi);
  return {match.mean_tv <= kPlantedMaxTv && elapsed < kPlantedSeconds,
          "mean TV " + fmt("%.4f", match.mean_tv) + " (limit " + fmt("%.2f", kPlantedMaxTv) + "), " +
              fmt("%.2f s", elapsed)};
}

// 5 ------------------------------------------------------------------------
Outcome count_conservation() {
  oracle::Generator g(555);
  int violations = 0;
  int checks = 0;
  for (int c = 0; c < kFuzzCorpora; ++c) {
    const std::size_t V = 1 + g.below(60);
    const std::size_t D = 1 + g.below(40);
    oracle::Docs docs(D);
    for (auto& d : docs) {
      const std::size_t len = 1 + g.below(30);
      for (std::size_t i = 0; i < len; ++i) d.push_back(static_cast<TermId>(g.below(V)));
    }
    const auto corpus = oracle::make_encoded(docs, V);
    Hyperparams hp = default_hyperparams(1 + static_cast<int>(g.below(12)));
    hp.alpha = 0.01 + g.uniform();
    hp.beta = 0.001 + g.uniform();
    hp.seed = c;
    hp.workers = c % 3 == 2 ? 2 + static_cast<int>(g.below(3)) : 1;
    hp.iterations = kFuzzSweeps;
    hp.burn_in = 0;
    try {
      auto state = init(corpus, hp);
      for (int s = 0; s < kFuzzSweeps; ++s) {
        sweep(state, corpus, hp);
        ++checks;
        check_invariants(state, corpus);
      }
    } catch (const InvariantError&) {
      ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) +
                               " post-sweep checks over " + std::to_string(kFuzzCorpora) + " corpora"};
}

// 6 ------------------------------------------------------------------------
double plain_cosine(const std::vector<double>& u, const std::vector<double>& v) {
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  return dot / std::sqrt(nu * nv);
}

Outcome graph_semantics() {
  thematic::testing::TempDir dir("accept-graph");
  const auto planted = oracle::generate_lda(7, 80, 200, 40, 0.3, 0.05, 77);
  const auto corpus = oracle::make_encoded(planted.docs, 80);
  Hyperparams hp = default_hyperparams(7);
  hp.iterations = 200;
  hp.burn_in = 50;
  hp.seed = 3;
  const auto model = train(corpus, hp);

  int mismatches = 0;
  std::size_t edges_seen = 0;
  for (auto mode : {SimilarityMode::word_based, SimilarityMode::document_based}) {
    const auto sim = topic_similarity(model, mode);
    const auto graph = build_graph(sim, kGraphThreshold);
    for (auto format : {GraphFormat::gexf, GraphFormat::json}) {
      const auto path = dir / (format == GraphFormat::gexf ? "g.gexf" : "g.json");
      export_graph(graph, std::nullopt, path, format);
      const auto back = read_graph(path, format).graph;
      std::set<std::pair<std::size_t, std::size_t>> exported;
      for (const auto& e : back.edges) exported.insert({e.source, e.target});
      std::set<std::pair<std::size_t, std::size_t>> expected;
      for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = i + 1; j < 7; ++j) {
          std::vector<double> u, v;
          if (mode == SimilarityMode::word_based) {
            u.assign(model.phi.row(i).begin(), model.phi.row(i).end());
            v.assign(model.phi.row(j).begin(), model.phi.row(j).end());
          } else {
            for (std::size_t d = 0; d < model.num_docs(); ++d) {
              u.push_back(model.theta(d, i));
              v.push_back(model.theta(d, j));
            }
          }
          if (plain_cosine(u, v) >= kGraphThreshold) expected.insert({i, j});
        }
      }
      mismatches += exported == expected ? 0 : 1;
      edges_seen += exported.size();
    }
  }

  // Boundary entry exactly at the threshold is kept; just below is dropped.
  SimilarityMatrix boundary;
  boundary.values = Matrix(3, 3, 1.0);
  boundary.values(0, 1) = boundary.values(1, 0) = 0.5;
  boundary.values(0, 2) = boundary.values(2, 0) = 0.19;
  boundary.values(1, 2) = boundary.values(2, 1) = 0.2;
  const auto b = build_graph(boundary, kGraphThreshold);
  const bool boundary_ok = b.edges.size() == 2 && b.edges[0] == TopicEdge{0, 1, 0.5} &&
                           b.edges[1] == TopicEdge{1, 2, 0.2};

  oracle::Generator g(606);
  int monotone_failures = 0;
  for (int t = 0; t < kMonotoneMatrices; ++t) {
    SimilarityMatrix s;
    const std::size_t n = 3 + g.below(10);
    s.values = Matrix(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s.values(i, j) = s.values(j, i) = g.uniform();
    }
    std::set<std::pair<std::size_t, std::size_t>> previous;
    for (const auto& e : build_graph(s, 0.0).edges) previous.insert({e.source, e.target});
    for (int step = 1; step <= 20; ++step) {
      std::set<std::pair<std::size_t, std::size_t>> current;
      for (const auto& e : build_graph(s, step / 20.0).edges) current.insert({e.source, e.target});
      if (!std::includes(previous.begin(), previous.end(), current.begin(), current.end())) ++monotone_failures;
      previous = std::move(current);
    }
  }
  return {mismatches == 0 && boundary_ok && monotone_failures == 0,
          std::to_string(mismatches) + " edge-set mismatches over 4 exports (" + std::to_string(edges_seen) +
              " edges), boundary " + (boundary_ok ? "kept" : "WRONG") + ", " + std::to_string(monotone_failures) +
              " monotonicity failures on " + std::to_string(kMonotoneMatrices) + " matrices"};
}

// 7 ------------------------------------------------------------------------
Outcome louvain_correctness() {
  std::vector<TopicGraph> suite{graphs::two_triangles_bridge(), graphs::two_triangles(), graphs::complete(4),
                                graphs::from_edges(2, {{0, 1, 1.0}})};
  // The same random families the unit suite uses, at resolution 1.
  std::mt19937_64 rng(77);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int t = 0; t < 8; ++t) {
      suite.push_back(t % 2 ? graphs::random_graph(n, 0.4, rng) : graphs::clustered_graph(n, 2 + t % 3, rng));
    }
  }
  int below = 0;
  double worst = 1.0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto best = exact_best_partition(suite[i], 1.0);
    const auto found = louvain(suite[i], {1.0}, i);
    if (found.modularity < kLouvainRatio * best.modularity - 1e-12) ++below;
    if (best.modularity > 0) worst = std::min(worst, found.modularity / best.modularity);
  }
  const auto bridge = louvain(graphs::two_triangles_bridge(), {1.0}, 7);
  const bool bridge_ok = canonical_assignment(bridge.assignment) == std::vector<std::size_t>{0, 0, 0, 1, 1, 1} &&
                         std::abs(bridge.modularity - 5.0 / 14.0) <= kBridgeQTolerance;
  return {below == 0 && bridge_ok,
          std::to_string(below) + "/" + std::to_string(suite.size()) + " graphs below " + fmt("%.2f", kLouvainRatio) +
              " x optimum (worst ratio " + fmt("%.3f", worst) + "), two-triangle bridge " +
              (bridge_ok ? "Q = 5/14" : "WRONG")};
}

// 8 ------------------------------------------------------------------------
Outcome run_determinism() {
  thematic::testing::TempDir dir("accept-run");
  {
    const std::vector<std::string> a{"kippers", "breakfast", "toast", "coffee", "eggs", "bacon", "tea", "jam",
                                     "porridge", "butter"};
    const std::vector<std::string> b{"kittens", "puppies", "cats", "dogs", "fur", "paws", "whiskers", "tails",
                                     "collar", "leash"};
    const std::vector<std::string> c{"train", "station", "ticket", "platform", "delay", "carriage", "driver",
                                     "timetable", "commute", "journey"};
    const std::vector<const std::vector<std::string>*> bags{&a, &b, &c};
    const std::vector<std::string> glue{"the", "my", "and", "of", "our", "with", "was", "at"};
    oracle::Generator g(8);
    std::ofstream out(dir / "corpus.jsonl");
    for (int d = 0; d < 300; ++d) {
      const auto mix = g.dirichlet(3, 0.3);
      std::string text = "I";
      for (int i = 0; i < 30; ++i) {
        const auto& bag = *bags[g.categorical(mix)];
        text += " " + glue[g.below(glue.size())] + " " + bag[g.below(bag.size())];
      }
      out << nlohmann::json{{"id", "p" + std::to_string(d)}, {"text", text}}.dump() << "\n";
    }
  }
  std::ofstream(dir / "run.ini") << "[thematic]\nformat_version = 1\n[ingest]\npath = corpus.jsonl\n"
                                    "[filter]\nenglish = true\n[train]\ntopics = 7, 20\niterations = 150\n"
                                    "burn_in = 50\nseed = 42\n[report]\ntop_words = 50\n";
  const std::string base = std::string(THEMATIC_CLI) + " --config " + (dir / "run.ini").string();
  for (const char* out : {"first", "second"}) {
    const std::string cmd = base + " --out " + (dir / out).string() + " run -q >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, std::string("run into ") + out + " failed"};
  }
  const auto m1 = load_manifest(dir / "first" / "manifest.json");
  const auto m2 = load_manifest(dir / "second" / "manifest.json");
  std::size_t identical = 0;
  bool verified = true;
  for (std::size_t i = 0; i < std::min(m1.outputs.size(), m2.outputs.size()); ++i) {
    identical += m1.outputs[i].path == m2.outputs[i].path && m1.outputs[i].sha256 == m2.outputs[i].sha256 ? 1 : 0;
    verified = verified && sha256_file(dir / "first" / m1.outputs[i].path) == m1.outputs[i].sha256 &&
               sha256_file(dir / "second" / m2.outputs[i].path) == m2.outputs[i].sha256;
  }
  const bool sets = m1.outputs.size() == m2.outputs.size() && m1.outputs.size() > 0;
  return {sets && identical == m1.outputs.size() && verified && m1.config_digest == m2.config_digest,
          std::to_string(identical) + "/" + std::to_string(m1.outputs.size()) +
              " outputs byte-identical across two runs (K = 7, 20), checksums " + (verified ? "verified" : "WRONG")};
}

// 9 ------------------------------------------------------------------------
Outcome throughput() {
  // LDA-generated corpus with per-topic CDFs for fast sampling.
  constexpr std::size_t kVocab = 20000;
  constexpr std::size_t kDocLength = 50;
  constexpr std::size_t kDocs = kThroughputTokens / kDocLength;
  oracle::Generator g(99);
  std::vector<std::vector<double>> cdf(kThroughputTopics);
  for (auto& c : cdf) {
    c = g.dirichlet(kVocab, 0.05);
    std::partial_sum(c.begin(), c.end(), c.begin());
  }
  oracle::Docs docs(kDocs);
  for (auto& d : docs) {
    const auto mix = g.dirichlet(kThroughputTopics, 0.1);
    d.reserve(kDocLength);
    for (std::size_t i = 0; i < kDocLength; ++i) {
      const auto& c = cdf[g.categorical(mix)];
      const auto it = std::lower_bound(c.begin(), c.end(), g.uniform() * c.back());
      d.push_back(static_cast<TermId>(std::min<std::size_t>(it - c.begin(), kVocab - 1)));
    }
  }
  const auto corpus = oracle::make_encoded(docs, kVocab);
  Hyperparams hp = default_hyperparams(kThroughputTopics);
  hp.iterations = kThroughputSweeps;
  hp.burn_in = kThroughputSweeps / 2;
  hp.seed = 5;
  const auto start = Clock::now();
  const auto model = train(corpus, hp);
  const double elapsed = seconds_since(start);
  return {elapsed <= kThroughputSeconds && model.sweeps == kThroughputSweeps,
          std::to_string(corpus.total_tokens) + " tokens, K = " + std::to_string(kThroughputTopics) + ", " +
              std::to_string(model.sweeps) + " sweeps in " + fmt("%.1f s", elapsed) + " (limit " +
              fmt("%.0f s", kThroughputSeconds) + ", single worker)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 stemmer conformance", stemmer_conformance},
      {"2 Gibbs exactness", gibbs_exactness},
      {"3 toy-corpus separation", toy_separation},
      {"4 planted-topic recovery", planted_recovery},
      {"5 count conservation", count_conservation},
      {"6 graph semantics", graph_semantics},
      {"7 Louvain correctness", louvain_correctness},
      {"8 run determinism", run_determinism},
      {"9 throughput", throughput},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %-26s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
