#pragma once

#include <algorithm>
#include <vector>

#include "sparsetd/graph.hpp"
#include "sparsetd/io.hpp"
#include "sparsetd/rng.hpp"

namespace sparsetd::testing {

inline std::vector<Edge> normalized_edges(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

inline Graph path_graph(int n) { return generate_path(n).graph; }

inline Graph grid_graph(int rows, int cols) {
  return generate_grid(rows, cols).graph;
}

inline Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  return Graph::from_edges(n, normalized_edges(edges));
}

/// Random connected graph: a random spanning tree plus extra edges.
inline Graph random_connected_graph(int n, int extra_edges, SplitRng& rng) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(rng.uniform(v), v);
  for (int i = 0; i < extra_edges; ++i) {
    int u = rng.uniform(n), v = rng.uniform(n);
    if (u == v) continue;
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return Graph::from_edges(n, normalized_edges(edges));
}

/// Random subset of size min(m, n).
inline VertexSet random_subset(int n, int m, SplitRng& rng) {
  VertexSet all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int i = 0; i < m && i < n; ++i) {
    int j = i + rng.uniform(n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(std::min(m, n));
  return normalized(all);
}

}  // namespace sparsetd::testing
