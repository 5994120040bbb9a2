#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "thematic/topicnet.hpp"

namespace thematic {

struct ModularityParams {
  double resolution = 1.0;  // gamma, multiplies the null-model term
};

struct Partition {
  std::vector<std::size_t> assignment;  // node -> community, ids dense in order of first appearance
  double modularity = 0.0;
  double resolution = 1.0;

  std::size_t num_communities() const;
  // Node lists per community, nodes ascending.
  std::vector<std::vector<std::size_t>> communities() const;
};

// Relabels communities densely in order of first appearance.
std::vector<std::size_t> canonical_assignment(std::span<const std::size_t> assignment);

/// Q = sum_c [ W_in(c) / m - gamma (S(c) / 2m)^2 ] with m the total edge
/// weight, W_in the intra-community weight and S the summed weighted degree.
/// Throws DataError on an edgeless graph.
double modularity(const TopicGraph& graph, std::span<const std::size_t> assignment, double gamma);
double modularity(const TopicGraph& graph, const Partition& partition, double gamma);

/// Weighted undirected graph with self-loops, the working representation of
/// the Louvain levels. A self-loop of weight w adds w to m and 2w to the
/// node's degree.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;  // no self-loops, both directions
  std::vector<double> self_loop;
  std::vector<double> degree;
  double total_weight = 0.0;

  std::size_t size() const { return adjacency.size(); }
  static WeightedGraph from(const TopicGraph& graph);
};

double modularity(const WeightedGraph& graph, std::span<const std::size_t> assignment, double gamma);

// One node per community; intra-community weight becomes the self-loop.
// `assignment` must be dense (see canonical_assignment).
WeightedGraph aggregate(const WeightedGraph& graph, std::span<const std::size_t> assignment);

/// Exhaustive search over all set partitions (test oracle). Ties go to the
/// lexicographically smallest canonical assignment. At most 12 nodes.
Partition exact_best_partition(const TopicGraph& graph, double gamma);

/// Louvain modularity maximisation: seeded random visit order per pass,
/// strictly improving moves to the best neighbouring community (ties to the
/// lowest community id), aggregation between levels, stop when a level moves
/// nothing. When `trace` is given it receives Q after every pass and every
/// aggregation.
Partition louvain(const TopicGraph& graph, const ModularityParams& params, std::uint64_t seed,
                  std::vector<double>* trace = nullptr);

// {"resolution", "modularity", "communities": [[node ids]...]}
void save_partition(const Partition& partition, const std::filesystem::path& path);
Partition load_partition(const std::filesystem::path& path, std::size_t num_nodes);

}  // namespace thematic
