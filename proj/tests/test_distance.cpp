#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sparsetd/distance.hpp"
#include "sparsetd/flow.hpp"

using namespace sparsetd;
using namespace sparsetd::testing;

namespace {

/// Brute-force minimum-weight (s,t)-vertex separator over all subsets.
long brute_min_cut(const Graph& g, int s, int t,
                   const std::vector<long>& weight) {
  const int n = g.num_vertices();
  long best = -1;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (mask & ((1u << s) | (1u << t))) continue;
    std::vector<char> deleted(n, 0);
    long w = 0;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) {
        deleted[v] = 1;
        w += weight[v];
      }
    if (best >= 0 && w >= best) continue;
    auto dist = bfs_distances(g, {s}, &deleted);
    if (dist[t] < 0) best = w;
  }
  return best;
}

std::vector<VertexSet> path_chain(int n) {
  std::vector<VertexSet> chain;
  for (int v = 1; v + 1 < n; ++v) chain.push_back({v});
  return chain;
}

}  // namespace

TEST_CASE("min_weight_vertex_cut matches brute force") {
  SplitRng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = random_connected_graph(5 + rng.uniform(6), rng.uniform(8), rng);
    const int n = g.num_vertices();
    int s = 0, t = n - 1;
    if (g.has_edge(s, t)) continue;  // no finite vertex cut
    std::vector<long> weight(n);
    for (auto& w : weight) w = 1 + rng.uniform(6);
    auto [cut, value] = min_weight_vertex_cut(g, s, t, weight);
    CHECK(value == brute_min_cut(g, s, t, weight));
    std::vector<char> deleted(n, 0);
    long sum = 0;
    for (int v : cut) {
      deleted[v] = 1;
      sum += weight[v];
    }
    CHECK(sum == value);
    CHECK(bfs_distances(g, {s}, &deleted)[t] < 0);
  }
}

TEST_CASE("shortcut_paths on s-v-t keeps everything in Q") {
  Graph g = path_graph(3);
  PQStructure pq;
  pq.p = 0;
  pq.q = 1;
  pq.s = 0;
  pq.t = 2;
  pq.paths = {{0, 1, 2}};
  DistanceDualParams params;
  params.d = 1;
  params.r = 1;
  auto out = shortcut_paths(g, 0, 2, {}, {}, pq, params);
  REQUIRE(out.paths.size() == 1);
  CHECK(out.paths[0] == std::vector<int>{0, 1, 2});
  CHECK(out.qsets[0] == VertexSet{0, 1, 2});
}

TEST_CASE("shortcut_paths with two disjoint paths") {
  Graph g = Graph::from_edges(
      8, {{0, 1}, {1, 2}, {2, 3}, {3, 7}, {0, 4}, {4, 5}, {5, 6}, {6, 7}});
  PQStructure pq;
  pq.p = 0;
  pq.q = 2;
  pq.s = 0;
  pq.t = 7;
  pq.paths = {{0, 1, 2, 3, 7}, {0, 4, 5, 6, 7}};
  DistanceDualParams params;
  params.d = 1;
  params.r = 1;
  auto out = shortcut_paths(g, 0, 7, {}, {}, pq, params);
  REQUIRE(out.paths.size() == 2);
  for (const auto& q : out.qsets) CHECK(q.size() <= 4);
}

TEST_CASE("shortcut_paths keeps the ball bound on a ladder") {
  Graph g = grid_graph(2, 6);
  int s = 0, t = 11;
  PQStructure pq = pq_structure(g, s, t, 2);
  DistanceDualParams params;
  params.d = 1;
  params.r = std::max(2, pq.p);
  auto out = shortcut_paths(g, s, t, {}, {}, pq, params);
  for (std::size_t i = 0; i < out.paths.size(); ++i) {
    CHECK(static_cast<int>(out.qsets[i].size()) <= 10 * params.d * params.r);
    for (std::size_t j = 0; j + 1 < out.paths[i].size(); ++j)
      CHECK(g.has_edge(out.paths[i][j], out.paths[i][j + 1]));
  }
}

TEST_CASE("reweighted_chain on a long path recovers base separators") {
  const int n = 40;
  Graph g = path_graph(n);
  auto chain = path_chain(n);
  DistanceDualParams params;
  params.d = 1;
  params.q = 2;
  auto out = reweighted_chain(g, 0, n - 1, {}, chain, params);
  REQUIRE(!out.separators.empty());
  for (std::size_t j = 0; j < out.separators.size(); ++j) {
    // Unique minimum-weight cut on a path: the base singleton itself.
    CHECK(out.separators[j] ==
          chain[static_cast<std::size_t>(out.source_index[j]) - 1]);
    CHECK(out.weights[j] == 1);
  }
}

TEST_CASE("reweighted_chain respects the weight budget on a ladder") {
  const int cols = 42;
  Graph g = grid_graph(2, cols);
  auto id = [&](int r, int c) { return r * cols + c; };
  int s = id(0, 0), t = id(0, cols - 1);
  std::vector<VertexSet> chain;
  for (int c = 1; c + 1 < cols; ++c)
    chain.push_back(normalized({id(0, c), id(1, c)}));
  DistanceDualParams params;
  params.d = 1;
  params.q = 2;
  auto out = reweighted_chain(g, s, t, {}, chain, params);
  REQUIRE(!out.separators.empty());
  for (std::size_t j = 0; j < out.separators.size(); ++j) {
    CHECK(out.weights[j] <= 2 * params.q);
    CHECK(static_cast<int>(out.separators[j].size()) <= 2 * params.q);
  }
}

TEST_CASE("reweighted_chain demands a long enough chain") {
  Graph g = path_graph(8);
  DistanceDualParams params;
  params.d = 1;
  params.q = 2;
  CHECK_THROWS(reweighted_chain(g, 0, 7, {}, path_chain(8), params));
}

TEST_CASE("reweighted separators stay far apart with X present") {
  const int n = 46;
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  int extra = n;  // a strand over the middle, deleted via X
  edges.emplace_back(10, extra);
  edges.emplace_back(extra, extra + 1);
  edges.emplace_back(extra + 1, 20);
  Graph g = Graph::from_edges(n + 2, edges);
  VertexSet x{extra, extra + 1};
  DistanceDualParams params;
  params.d = 1;
  params.q = 2;
  params.lambda = 1;
  auto out = reweighted_chain(g, 0, n - 1, x, path_chain(n), params);
  REQUIRE(out.separators.size() >= 2);
  std::vector<char> in_x(g.num_vertices(), 0);
  for (int v : x) in_x[v] = 1;
  for (std::size_t i = 0; i < out.separators.size(); ++i) {
    auto dist = bfs_distances(g, out.separators[i], &in_x);
    for (std::size_t j = i + 1; j < out.separators.size(); ++j)
      for (int v : out.separators[j]) CHECK(dist[v] > params.d);
  }
}

TEST_CASE("dual_distance dispatches by chain length") {
  DistanceDualParams params;
  params.d = 1;
  params.h = 6;
  params.k = 2;

  SUBCASE("an edge yields trivial paths") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    params.p = 3;
    params.q = 3;
    auto out = dual_distance(g, 0, 1, {}, {}, params);
    CHECK(!out.is_chain);
    CHECK(out.p0 == 0);
    REQUIRE(!out.paths.paths.empty());
    CHECK(out.paths.qsets[0] == VertexSet{0, 1});
  }

  SUBCASE("a long path yields a chain") {
    Graph g = path_graph(60);
    params.p = 40;
    params.q = 2;
    auto out = dual_distance(g, 0, 59, {}, {}, params);
    CHECK(out.is_chain);
    CHECK(out.p0 >= 40);
    CHECK(!out.chain.separators.empty());
  }

  SUBCASE("deleted set with one component is tolerated") {
    Graph base = grid_graph(3, 8);
    params.p = 30;  // forces the paths branch on this small grid
    params.q = 4;
    params.lambda = 1;
    VertexSet x{9, 10};  // a chunk of the middle row
    auto out = dual_distance(base, 0, 23, x, {}, params);
    if (!out.is_chain) {
      for (const auto& path : out.paths.paths)
        for (int v : path) CHECK(!set_contains(x, v));
    } else {
      for (const auto& c : out.chain.separators)
        CHECK(set_intersection(c, x).empty());
    }
  }

  SUBCASE("terminals must be connected in G - X") {
    Graph g = path_graph(5);
    params.p = 1;
    params.q = 2;
    CHECK_THROWS(dual_distance(g, 0, 4, {2}, {}, params));
  }
}

TEST_CASE("planted sets on shortcut paths: one path stays clean") {
  // Checkable here because the test knows the hidden sets.
  SplitRng rng(61);
  Graph g = grid_graph(4, 7);
  int s = 0, t = 27;
  for (int trial = 0; trial < 15; ++trial) {
    VertexSet z0 = set_difference(random_subset(28, 2, rng), VertexSet{s, t});
    VertexSet z1 = set_difference(random_subset(28, 1, rng), VertexSet{s, t});
    PQStructure pq = pq_structure(g, s, t, 8);
    DistanceDualParams params;
    params.d = 1;
    params.r = std::max(6, pq.p);
    auto out = shortcut_paths(g, s, t, {}, z0, pq, params);
    if (out.paths.empty()) continue;
    VertexSet ball = neighborhood(g, set_union(z0, z1), 1);
    bool clean = false;
    for (std::size_t i = 0; i < out.paths.size(); ++i) {
      VertexSet pv = normalized(
          VertexSet(out.paths[i].begin(), out.paths[i].end()));
      if (set_intersection(set_difference(pv, out.qsets[i]), ball).empty())
        clean = true;
    }
    CHECK(clean);
  }
}

TEST_CASE("planted sets on a reweighted chain: most separators untouched") {
  // Every vertex is close to at most one of the new separators, so a
  // small planted set can only touch a few of them.
  const int n = 80;
  Graph g = path_graph(n);
  std::vector<VertexSet> chain;
  for (int v = 1; v + 1 < n; ++v) chain.push_back({v});
  DistanceDualParams params;
  params.d = 1;
  params.q = 2;
  auto out = reweighted_chain(g, 0, n - 1, {}, chain, params);
  REQUIRE(out.separators.size() >= 3);
  SplitRng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    VertexSet z = random_subset(n, 2, rng);
    VertexSet ball = neighborhood(g, z, params.d);
    int touched = 0;
    for (const auto& c : out.separators)
      if (!set_intersection(c, ball).empty()) ++touched;
    CHECK(touched <= static_cast<int>(z.size()));
    CHECK(touched < static_cast<int>(out.separators.size()));
  }
}
