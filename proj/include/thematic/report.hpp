#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thematic/community.hpp"
#include "thematic/lda.hpp"
#include "thematic/topicnet.hpp"

namespace thematic {

inline constexpr std::size_t kDefaultTopWords = 50;

/// Human topic labels: one "topic_id<TAB>label" per line, '#' comments and
/// blank lines ignored. Returns one label per topic (empty when unlabelled).
/// Throws DataError for malformed lines or ids outside [0, topics).
std::vector<std::string> load_annotations(const std::filesystem::path& path, std::size_t topics);

struct TopicTableRow {
  std::size_t topic = 0;
  std::string label;
  std::size_t rank = 0;  // 1-based
  std::string term;
  double weight = 0.0;
};

/// TSV with header "topic_id label rank term weight"; one row per (topic, rank),
/// weights with 6 decimals. `labels` may be empty.
void export_topic_table(const TopicModel& model, std::size_t k, const std::vector<std::string>& labels,
                        const std::filesystem::path& path);
std::vector<TopicTableRow> read_topic_table(const std::filesystem::path& path);

/// TSV (topic_id, label, count) ordered by topic id, plus an SVG bar chart.
void export_histogram(const std::vector<std::size_t>& counts, const std::vector<std::string>& labels,
                      const std::filesystem::path& tsv_path, const std::filesystem::path& svg_path);
std::vector<std::size_t> read_histogram(const std::filesystem::path& tsv_path);

enum class GraphFormat { gexf, json };

GraphFormat parse_graph_format(const std::string& name);

/// GEXF 1.2 (undirected, edge weights, optional integer "community" node
/// attribute) or JSON {nodes:[{id,label,community}], edges:[{source,target,weight}]}.
/// Weights are written in shortest round-trip form.
void export_graph(const TopicGraph& graph, const std::optional<Partition>& partition,
                  const std::filesystem::path& path, GraphFormat format);

struct LoadedGraph {
  TopicGraph graph;
  std::vector<std::optional<std::size_t>> community;  // per node
};

// Readers for the files written by export_graph.
LoadedGraph read_graph(const std::filesystem::path& path, GraphFormat format);

}  // namespace thematic
