#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thematic/lda.hpp"
#include "thematic/matrix.hpp"

namespace thematic {

enum class SimilarityMode {
  word_based,      // rows of phi (length V)
  document_based,  // columns of theta (length D)
};

std::string to_string(SimilarityMode mode);
// Accepts word / word_based / document / document_based.
SimilarityMode parse_similarity_mode(const std::string& name);
// word_based for K <= 10, document_based otherwise.
SimilarityMode default_similarity_mode(std::size_t topics);

struct SimilarityMatrix {
  Matrix values;  // K x K, symmetric, unit diagonal
  SimilarityMode mode = SimilarityMode::word_based;

  std::size_t size() const { return values.rows; }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
};

struct TopicEdge {
  std::size_t source = 0;  // source < target
  std::size_t target = 0;
  double weight = 0.0;

  friend bool operator==(const TopicEdge&, const TopicEdge&) = default;
};

struct TopicGraph {
  std::size_t num_nodes = 0;
  std::vector<std::string> labels;  // empty, or one per node
  std::vector<TopicEdge> edges;     // sorted by (source, target)
  double threshold = 0.0;

  double total_weight() const;
};

/// dot(u, v) / (|u| |v|). Throws UsageError on length mismatch or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

SimilarityMatrix topic_similarity(const TopicModel& model, SimilarityMode mode);

/// Keeps every pair i < j with similarity >= threshold; weights copied verbatim.
TopicGraph build_graph(const SimilarityMatrix& sim, double threshold = 0.2,
                       const std::vector<std::string>& labels = {});

// K lines of K tab-separated values with 6 decimals.
void write_similarity_tsv(const SimilarityMatrix& sim, const std::filesystem::path& path);
SimilarityMatrix read_similarity_tsv(const std::filesystem::path& path, SimilarityMode mode);

}  // namespace thematic
