#pragma once

#include <vector>

#include "sparsetd/graph.hpp"

namespace sparsetd {

struct BFSLayering {
  int root = 0;
  std::vector<int> layer;   // -1 for unreachable (never, on connected input)
  std::vector<int> parent;  // -1 for the root
  int max_layer = 0;
};

/// Standard BFS layering from a root of a connected graph.
BFSLayering bfs_layering(const Graph& g, int root);

/// Constants delivered by the decomposition construction: bound on the
/// number of forest components (a_F), its maximum degree (delta_F), and
/// the size factor c_F governing |bag| <= c_F*(ecc+1) and
/// |ball(v,d') ∩ bag| <= c_F*(2d'+1).
struct ForestConstants {
  int components = 3;
  int max_degree = 3;
  int size_factor = 3;
};

/// Tree decomposition with a spanning forest per bag. The forests are
/// forests of the host graph: the internal triangulation of the input
/// (every separation of the host is a separation of the input, and
/// host balls contain input balls, so downstream consumers work on the
/// host).
struct StructuredDecomposition {
  TreeDecomposition td;
  std::vector<std::vector<Edge>> forests;
  ForestConstants constants;
  Graph host;  // triangulated supergraph (the input itself on fallback)
  int root_vertex = 0;
  int root_ecc = 0;
  bool degenerate = false;  // single-bag fallback, constants not guaranteed
};

/// BFS-tree / dual-tree decomposition of an embedded connected planar
/// graph. Triangulates internally; each bag is the union of the three
/// root-to-corner BFS paths of a triangular face, and the per-bag
/// forest is those paths made disjoint (at most 3 paths, degree <= 2).
/// Fewer than 3 vertices falls back to a single bag.
StructuredDecomposition three_path_decomposition(const Graph& g, int root);

struct CandidateSeparation {
  Separation sep;
  std::vector<Edge> forest;  // spanning forest of G[A ∩ B]
  bool degenerate = false;
  int node = -1;  // decomposition node it came from
};

/// Picks a node t whose bag splits every component of T - {t} to at
/// most half of the total weight (outside the bag), and a separation
/// whose cut is exactly that bag with both strict sides of weight at
/// most 2/3 of the total. Degenerate results (no strict side
/// available) are flagged.
CandidateSeparation balanced_node_for_weight(const StructuredDecomposition& sd,
                                             const Graph& g,
                                             const std::vector<double>& mu);

/// Family 𝒳 of candidate separations covering every weight function
/// supported on U: topmost-bag nodes of U plus pairwise LCAs, with all
/// component bipartitions of T - {t} (degree <= 3 per node).
std::vector<CandidateSeparation> candidate_separations(
    const StructuredDecomposition& sd, const Graph& g, const VertexSet& u);

/// Converts a family of d-clusters into pairwise disjoint 2d-clusters
/// partitioning the same union: greedy maximal center set at pairwise
/// distance > d in G[∪Z], then Voronoi cells with ties to the lowest
/// center id.
ClusterFamily disjoint_clusters(const Graph& g, const ClusterFamily& zs);

}  // namespace sparsetd
