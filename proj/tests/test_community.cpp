#include <algorithm>
#include <fstream>
#include <random>

#include "doctest.h"
#include "graphs.hpp"
#include "test_support.hpp"
#include "thematic/community.hpp"
#include "thematic/error.hpp"

using namespace thematic;
using namespace thematic::graphs;
using thematic::testing::TempDir;
using Assignment = std::vector<std::size_t>;

namespace {

bool same_grouping(const Assignment& a, const Assignment& b) {
  return canonical_assignment(a) == canonical_assignment(b);
}

// Brute force over every assignment in [0, n)^n, independent of the library's enumeration.
double reference_best(const TopicGraph& g, double gamma) {
  const std::size_t n = g.num_nodes;
  Assignment c(n, 0);
  double best = -1e300;
  while (true) {
    best = std::max(best, reference_modularity(g, c, gamma));
    std::size_t i = 0;
    while (i < n && ++c[i] == n) c[i++] = 0;
    if (i == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("modularity values") {
  const auto bridge = two_triangles_bridge();
  const Assignment triangles{0, 0, 0, 1, 1, 1};
  CHECK(modularity(bridge, triangles, 1.0) == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
  CHECK(modularity(bridge, Assignment(6, 0), 1.0) == doctest::Approx(0.0).epsilon(1e-12));

  const auto edge = from_edges(2, {{0, 1, 1.0}});
  CHECK(modularity(edge, Assignment{0, 1}, 1.0) == doctest::Approx(-0.5));
  CHECK(modularity(edge, Assignment{0, 0}, 1.0) == doctest::Approx(0.0));

  CHECK(modularity(two_triangles(), triangles, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(modularity(from_edges(3, {}), Assignment{0, 1, 2}, 1.0), DataError);
  CHECK_THROWS_AS(modularity(edge, Assignment{0}, 1.0), UsageError);
}

TEST_CASE("modularity agrees with the dense-matrix formula") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(7, 0.4, rng);
    Assignment c(7);
    for (auto& v : c) v = pick(rng);
    for (double gamma : {0.5, 1.0, 2.0}) {
      CHECK(modularity(g, c, gamma) == doctest::Approx(reference_modularity(g, c, gamma)).epsilon(1e-12));
    }
  }
}

TEST_CASE("aggregation preserves modularity") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_graph(9, 0.35, rng);
    Assignment c(9);
    for (auto& v : c) v = pick(rng);
    c = canonical_assignment(c);
    const auto wg = WeightedGraph::from(g);
    const auto agg = aggregate(wg, c);
    Assignment identity(agg.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    CHECK(agg.total_weight == doctest::Approx(wg.total_weight));
    CHECK(modularity(agg, identity, 1.0) == doctest::Approx(modularity(g, c, 1.0)).epsilon(1e-12));
    CHECK(modularity(wg, c, 1.3) == doctest::Approx(modularity(g, c, 1.3)).epsilon(1e-12));
  }
}

TEST_CASE("exact search") {
  auto best = exact_best_partition(two_triangles_bridge(), 1.0);
  CHECK(best.assignment == Assignment{0, 0, 0, 1, 1, 1});
  CHECK(best.modularity == doctest::Approx(5.0 / 14.0).epsilon(1e-12));

  CHECK(exact_best_partition(complete(4), 1.0).assignment == Assignment(4, 0));
  best = exact_best_partition(from_edges(2, {{0, 1, 1.0}}), 1.0);
  CHECK(best.assignment == Assignment{0, 0});
  CHECK(best.modularity == doctest::Approx(0.0));

  CHECK_THROWS_AS(exact_best_partition(complete(13), 1.0), UsageError);
  CHECK_THROWS_AS(exact_best_partition(from_edges(3, {}), 1.0), DataError);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 25; ++t) {
    const auto g = random_graph(6, 0.5, rng);
    const auto p = exact_best_partition(g, 1.0);
    CHECK(p.modularity == doctest::Approx(reference_best(g, 1.0)).epsilon(1e-12));
    CHECK(p.modularity == doctest::Approx(reference_modularity(g, p.assignment, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("louvain on the reference graphs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = louvain(two_triangles_bridge(), {}, seed);
    CHECK(same_grouping(p.assignment, {0, 0, 0, 1, 1, 1}));
    CHECK(p.modularity == doctest::Approx(5.0 / 14.0).epsilon(1e-12));

    CHECK(louvain(complete(4), {}, seed).num_communities() == 1);

    p = louvain(two_triangles(), {}, seed);
    CHECK(p.num_communities() == 2);
    CHECK(p.modularity == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(louvain(from_edges(4, {}), {}, 1), DataError);
  CHECK_THROWS_AS(louvain(complete(3), {0.0}, 1), UsageError);
}

TEST_CASE("louvain is near-optimal on the reference graphs") {
  const std::vector<TopicGraph> named{two_triangles_bridge(), two_triangles(), complete(4), complete(6, 0.3),
                                      from_edges(2, {{0, 1, 1.0}})};
  for (const auto& g : named) {
    const auto best = exact_best_partition(g, 1.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      CHECK(louvain(g, {}, seed).modularity >= 0.95 * best.modularity - 1e-12);
    }
  }
}

TEST_CASE("louvain can stop at a local optimum") {
  // Six-node path: pairs {01}{23}{45} give 0.26 and no single move or merge
  // improves them; the optimum {012}{345} gives 0.3.
  const auto path = from_edges(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}});
  CHECK(exact_best_partition(path, 1.0).modularity == doctest::Approx(0.3));
  int optimal = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double q = louvain(path, {}, seed).modularity;
    CHECK(q >= 0.26 - 1e-12);
    optimal += q > 0.3 - 1e-12 ? 1 : 0;
  }
  CHECK(optimal > 0);
  CHECK(optimal < 100);
}

TEST_CASE("louvain output is consistent on random graphs") {
  std::mt19937_64 rng(77);
  int graphs = 0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int t = 0; t < 8; ++t) {
      const auto g = t % 2 ? random_graph(n, 0.4, rng) : clustered_graph(n, 2 + t % 3, rng);
      for (double gamma : {0.5, 1.0, 1.5}) {
        std::vector<double> trace;
        const auto p = louvain(g, {gamma}, static_cast<std::uint64_t>(t), &trace);
        ++graphs;
        CHECK(p.assignment == canonical_assignment(p.assignment));
        CHECK(p.resolution == gamma);
        CHECK(std::abs(p.modularity - modularity(g, p.assignment, gamma)) <= 1e-9);
        CHECK(std::abs(p.modularity - reference_modularity(g, p.assignment, gamma)) <= 1e-9);
        REQUIRE_FALSE(trace.empty());
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-12);
        CHECK(trace.back() == doctest::Approx(p.modularity).epsilon(1e-9));
        CHECK(p.modularity <= exact_best_partition(g, gamma).modularity + 1e-12);
      }
    }
  }
  CHECK(graphs == 9 * 8 * 3);
}

TEST_CASE("louvain is seeded and equivariant under relabelling") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto g = clustered_graph(10, 3, rng);
    const auto a = louvain(g, {}, 42);
    const auto b = louvain(g, {}, 42);
    CHECK(a.assignment == b.assignment);

    // Permute node ids; the partition found should map through the permutation
    // whenever the optimum is unique, and always stay near-optimal.
    std::vector<std::size_t> perm(10);
    for (std::size_t i = 0; i < 10; ++i) perm[i] = (i * 7 + 3) % 10;
    std::vector<TopicEdge> edges;
    for (const auto& e : g.edges) {
      edges.push_back({std::min(perm[e.source], perm[e.target]), std::max(perm[e.source], perm[e.target]), e.weight});
    }
    std::sort(edges.begin(), edges.end(),
              [](const TopicEdge& x, const TopicEdge& y) { return std::tie(x.source, x.target) < std::tie(y.source, y.target); });
    const auto h = from_edges(10, edges);
    const auto best_g = exact_best_partition(g, 1.0);
    const auto best_h = exact_best_partition(h, 1.0);
    CHECK(best_g.modularity == doctest::Approx(best_h.modularity).epsilon(1e-12));
    Assignment mapped(10);
    for (std::size_t i = 0; i < 10; ++i) mapped[perm[i]] = best_g.assignment[i];
    CHECK(same_grouping(mapped, best_h.assignment));
    const auto ph = louvain(h, {}, 42);
    CHECK(std::abs(ph.modularity - a.modularity) <= 0.05 * best_g.modularity + 1e-12);
  }
}

TEST_CASE("partition files") {
  TempDir dir("comm");
  const auto p = louvain(two_triangles_bridge(), {}, 1);
  save_partition(p, dir / "p.json");
  const auto back = load_partition(dir / "p.json", 6);
  CHECK(back.assignment == p.assignment);
  CHECK(back.modularity == p.modularity);
  CHECK(back.resolution == 1.0);
  CHECK(p.communities() == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4, 5}});
  CHECK_THROWS_AS(load_partition(dir / "p.json", 7), DataError);
  std::ofstream(dir / "dup.json") << R"({"resolution":1,"modularity":0,"communities":[[0,1],[1,2]]})";
  CHECK_THROWS_AS(load_partition(dir / "dup.json", 3), DataError);
}
