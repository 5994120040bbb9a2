#include "thematic/topicnet.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "thematic/error.hpp"
#include "thematic/format.hpp"

namespace thematic {

std::string to_string(SimilarityMode mode) {
  return mode == SimilarityMode::word_based ? "word_based" : "document_based";
}

SimilarityMode parse_similarity_mode(const std::string& name) {
  if (name == "word" || name == "word_based") return SimilarityMode::word_based;
  if (name == "document" || name == "document_based") return SimilarityMode::document_based;
  throw UsageError("unknown similarity mode '" + name + "' (expected word or document)");
}

SimilarityMode default_similarity_mode(std::size_t topics) {
  return topics <= 10 ? SimilarityMode::word_based : SimilarityMode::document_based;
}

double TopicGraph::total_weight() const {
  double m = 0.0;
  for (const auto& e : edges) m += e.weight;
  return m;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw UsageError("cosine: vectors differ in length");
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw UsageError("cosine: similarity with a zero vector is undefined");
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

SimilarityMatrix topic_similarity(const TopicModel& model, SimilarityMode mode) {
  const std::size_t K = model.num_topics();
  if (K == 0) throw UsageError("model has no topics");
  // One row per topic.
  Matrix vectors;
  if (mode == SimilarityMode::word_based) {
    vectors = model.phi;
  } else {
    vectors = Matrix(K, model.num_docs());
    for (std::size_t d = 0; d < model.num_docs(); ++d) {
      for (std::size_t k = 0; k < K; ++k) vectors(k, d) = model.theta(d, k);
    }
  }
  SimilarityMatrix sim{Matrix(K, K), mode};
  for (std::size_t i = 0; i < K; ++i) {
    sim.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < K; ++j) {
      const double c = cosine(vectors.row(i), vectors.row(j));
      sim.values(i, j) = c;
      sim.values(j, i) = c;
    }
  }
  return sim;
}

TopicGraph build_graph(const SimilarityMatrix& sim, double threshold, const std::vector<std::string>& labels) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw UsageError("threshold must lie in [0, 1]");
  const std::size_t K = sim.size();
  if (!labels.empty() && labels.size() != K) throw UsageError("need one label per topic");
  TopicGraph g;
  g.num_nodes = K;
  g.labels = labels;
  g.threshold = threshold;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i + 1; j < K; ++j) {
      if (sim(i, j) >= threshold) g.edges.push_back({i, j, sim(i, j)});
    }
  }
  return g;
}

void write_similarity_tsv(const SimilarityMatrix& sim, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < sim.size(); ++i) {
    for (std::size_t j = 0; j < sim.size(); ++j) {
      if (j > 0) out << '\t';
      out << fixed6(sim(i, j));
    }
    out << '\n';
  }
  if (!out) throw DataError("error while writing '" + path.string() + "'");
}

SimilarityMatrix read_similarity_tsv(const std::filesystem::path& path, SimilarityMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto& row = rows.emplace_back();
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    std::string cell;
    while (std::getline(fields, cell, '\t')) row.push_back(parse_double(cell));
  }
  const std::size_t K = rows.size();
  SimilarityMatrix sim{Matrix(K, K), mode};
  for (std::size_t i = 0; i < K; ++i) {
    if (rows[i].size() != K) throw DataError("similarity matrix in '" + path.string() + "' is not square");
    std::copy(rows[i].begin(), rows[i].end(), sim.values.row(i).begin());
  }
  return sim;
}

}  // namespace thematic
