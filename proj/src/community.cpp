#include "thematic/community.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "json.hpp"
#include "thematic/error.hpp"
#include "thematic/rng.hpp"

namespace thematic {

namespace {

// Smallest modularity gain treated as an improvement.
constexpr double kMinGain = 1e-12;

void check_assignment(std::size_t nodes, std::span<const std::size_t> assignment) {
  if (assignment.size() != nodes) throw UsageError("assignment size differs from the node count");
}

}  // namespace

std::size_t Partition::num_communities() const {
  return assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
}

std::vector<std::vector<std::size_t>> Partition::communities() const {
  std::vector<std::vector<std::size_t>> out(num_communities());
  for (std::size_t v = 0; v < assignment.size(); ++v) out[assignment[v]].push_back(v);
  return out;
}

std::vector<std::size_t> canonical_assignment(std::span<const std::size_t> assignment) {
  std::map<std::size_t, std::size_t> relabel;
  std::vector<std::size_t> out(assignment.size());
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    out[v] = relabel.try_emplace(assignment[v], relabel.size()).first->second;
  }
  return out;
}

double modularity(const TopicGraph& graph, std::span<const std::size_t> assignment, double gamma) {
  check_assignment(graph.num_nodes, assignment);
  const double m = graph.total_weight();
  if (!(m > 0.0)) throw DataError("modularity is undefined for an edgeless graph");
  const std::size_t communities =
      assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> inside(communities, 0.0);
  std::vector<double> strength(communities, 0.0);
  for (const auto& e : graph.edges) {
    strength[assignment[e.source]] += e.weight;
    strength[assignment[e.target]] += e.weight;
    if (assignment[e.source] == assignment[e.target]) inside[assignment[e.source]] += e.weight;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < communities; ++c) {
    const double s = strength[c] / (2.0 * m);
    q += inside[c] / m - gamma * s * s;
  }
  return q;
}

double modularity(const TopicGraph& graph, const Partition& partition, double gamma) {
  return modularity(graph, partition.assignment, gamma);
}

WeightedGraph WeightedGraph::from(const TopicGraph& graph) {
  WeightedGraph g;
  g.adjacency.resize(graph.num_nodes);
  g.self_loop.assign(graph.num_nodes, 0.0);
  g.degree.assign(graph.num_nodes, 0.0);
  for (const auto& e : graph.edges) {
    if (e.source >= graph.num_nodes || e.target >= graph.num_nodes) throw DataError("edge endpoint out of range");
    if (e.source == e.target) {
      g.self_loop[e.source] += e.weight;
      g.degree[e.source] += 2.0 * e.weight;
    } else {
      g.adjacency[e.source].emplace_back(e.target, e.weight);
      g.adjacency[e.target].emplace_back(e.source, e.weight);
      g.degree[e.source] += e.weight;
      g.degree[e.target] += e.weight;
    }
    g.total_weight += e.weight;
  }
  return g;
}

double modularity(const WeightedGraph& graph, std::span<const std::size_t> assignment, double gamma) {
  check_assignment(graph.size(), assignment);
  const double m = graph.total_weight;
  if (!(m > 0.0)) throw DataError("modularity is undefined for an edgeless graph");
  const std::size_t communities =
      assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> inside(communities, 0.0);
  std::vector<double> strength(communities, 0.0);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const auto c = assignment[v];
    strength[c] += graph.degree[v];
    inside[c] += graph.self_loop[v];
    for (const auto& [u, w] : graph.adjacency[v]) {
      if (u > v && assignment[u] == c) inside[c] += w;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < communities; ++c) {
    const double s = strength[c] / (2.0 * m);
    q += inside[c] / m - gamma * s * s;
  }
  return q;
}

WeightedGraph aggregate(const WeightedGraph& graph, std::span<const std::size_t> assignment) {
  check_assignment(graph.size(), assignment);
  const std::size_t communities =
      assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  WeightedGraph out;
  out.adjacency.resize(communities);
  out.self_loop.assign(communities, 0.0);
  out.degree.assign(communities, 0.0);
  out.total_weight = graph.total_weight;
  std::map<std::pair<std::size_t, std::size_t>, double> between;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const auto c = assignment[v];
    out.self_loop[c] += graph.self_loop[v];
    out.degree[c] += graph.degree[v];
    for (const auto& [u, w] : graph.adjacency[v]) {
      if (u < v) continue;
      const auto d = assignment[u];
      if (c == d) {
        out.self_loop[c] += w;
      } else {
        between[{std::min(c, d), std::max(c, d)}] += w;
      }
    }
  }
  for (const auto& [key, w] : between) {
    out.adjacency[key.first].emplace_back(key.second, w);
    out.adjacency[key.second].emplace_back(key.first, w);
  }
  return out;
}

Partition exact_best_partition(const TopicGraph& graph, double gamma) {
  const std::size_t n = graph.num_nodes;
  if (n > 12) throw UsageError("exhaustive partition search is limited to 12 nodes");
  if (!(graph.total_weight() > 0.0)) throw DataError("modularity is undefined for an edgeless graph");
  // Restricted growth strings in lexicographic order enumerate each set partition once.
  std::vector<std::size_t> rgs(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  Partition best;
  best.resolution = gamma;
  best.modularity = -std::numeric_limits<double>::infinity();
  while (true) {
    const double q = modularity(graph, rgs, gamma);
    if (q > best.modularity + kMinGain) {
      best.modularity = q;
      best.assignment = rgs;
    }
    // Next string: bump the rightmost position that may still grow.
    std::size_t i = n;
    bool found = false;
    while (i-- > 1) {
      if (rgs[i] <= prefix_max[i - 1]) {
        found = true;
        break;
      }
    }
    if (!found) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return best;
}

namespace {

// Phase one on a single level. Returns the (non-canonical) community of each
// node and whether anything moved.
std::pair<std::vector<std::size_t>, bool> local_moving(const WeightedGraph& g, double gamma, Rng& rng,
                                                       std::vector<double>* trace) {
  const std::size_t n = g.size();
  const double m = g.total_weight;
  std::vector<std::size_t> community(n);
  std::iota(community.begin(), community.end(), std::size_t{0});
  std::vector<double> total(g.degree);
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  std::vector<std::size_t> order(community);
  bool moved_any = false;

  while (true) {
    rng.shuffle(std::span<std::size_t>(order));
    std::size_t moves = 0;
    for (const auto v : order) {
      const double k = g.degree[v];
      for (const auto& [u, w] : g.adjacency[v]) {
        if (link[community[u]] == 0.0) touched.push_back(community[u]);
        link[community[u]] += w;
      }
      const auto home = community[v];
      total[home] -= k;
      // Gain of joining c, relative to v sitting alone, in units of Q.
      auto gain = [&](std::size_t c) { return (link[c] - gamma * total[c] * k / (2.0 * m)) / m; };
      std::sort(touched.begin(), touched.end());
      std::size_t best = home;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (const auto c : touched) {
        if (c == home) continue;
        if (const double gc = gain(c); gc > best_gain) {
          best = c;
          best_gain = gc;
        }
      }
      if (best == home || best_gain - gain(home) <= kMinGain) best = home;
      total[best] += k;
      if (best != home) {
        community[v] = best;
        ++moves;
      }
      for (const auto c : touched) link[c] = 0.0;
      touched.clear();
    }
    if (trace != nullptr) trace->push_back(modularity(g, canonical_assignment(community), gamma));
    if (moves == 0) break;
    moved_any = true;
  }
  return {community, moved_any};
}

}  // namespace

Partition louvain(const TopicGraph& graph, const ModularityParams& params, std::uint64_t seed,
                  std::vector<double>* trace) {
  if (!(params.resolution > 0.0)) throw UsageError("resolution must be positive");
  if (!(graph.total_weight() > 0.0)) throw DataError("community detection needs at least one weighted edge");
  const double gamma = params.resolution;
  WeightedGraph level = WeightedGraph::from(graph);
  std::vector<std::size_t> membership(graph.num_nodes);
  std::iota(membership.begin(), membership.end(), std::size_t{0});
  Rng rng(seed);
  if (trace != nullptr) trace->push_back(modularity(level, membership, gamma));

  while (true) {
    auto [community, moved] = local_moving(level, gamma, rng, trace);
    if (!moved) break;
    const auto dense = canonical_assignment(community);
    for (auto& c : membership) c = dense[c];
    level = aggregate(level, dense);
    if (trace != nullptr) {
      std::vector<std::size_t> identity(level.size());
      std::iota(identity.begin(), identity.end(), std::size_t{0});
      trace->push_back(modularity(level, identity, gamma));
    }
  }

  Partition p;
  p.assignment = canonical_assignment(membership);
  p.resolution = gamma;
  p.modularity = modularity(graph, p.assignment, gamma);
  return p;
}

void save_partition(const Partition& partition, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["resolution"] = partition.resolution;
  j["modularity"] = partition.modularity;
  j["communities"] = partition.communities();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw DataError("error while writing '" + path.string() + "'");
}

Partition load_partition(const std::filesystem::path& path, std::size_t num_nodes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  try {
    const auto j = nlohmann::json::parse(in);
    Partition p;
    p.resolution = j.at("resolution").get<double>();
    p.modularity = j.at("modularity").get<double>();
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    p.assignment.assign(num_nodes, unset);
    const auto groups = j.at("communities").get<std::vector<std::vector<std::size_t>>>();
    for (std::size_t c = 0; c < groups.size(); ++c) {
      for (const auto v : groups[c]) {
        if (v >= num_nodes || p.assignment[v] != unset) throw DataError("partition node list is inconsistent");
        p.assignment[v] = c;
      }
    }
    if (std::find(p.assignment.begin(), p.assignment.end(), unset) != p.assignment.end()) {
      throw DataError("partition leaves nodes unassigned");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed partition file '" + path.string() + "': " + e.what());
  }
}

}  // namespace thematic
