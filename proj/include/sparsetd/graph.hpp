#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sparsetd {

using Edge = std::pair<int, int>;
using VertexSet = std::vector<int>;  // sorted, unique

/// Rotation system: for each vertex, its neighbors in cyclic order.
using Rotation = std::vector<std::vector<int>>;

/// Undirected simple graph on vertices 0..n-1 with sorted adjacency
/// lists and an optional combinatorial embedding. Graphs are values:
/// every operation that changes a graph builds a new one.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph, sorting adjacency lists and rejecting loops and
  /// parallel edges. Throws std::invalid_argument on bad input.
  static Graph from_edges(int n, const std::vector<Edge>& edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return m_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  bool has_edge(int u, int v) const;
  std::vector<Edge> edge_list() const;

  bool has_rotation() const { return rotation_.has_value(); }
  const Rotation& rotation() const { return *rotation_; }
  /// Installs a rotation system. Must list exactly the neighbors of
  /// each vertex; the Euler check is validated separately.
  void set_rotation(Rotation rot);
  void clear_rotation() { rotation_.reset(); }

  bool connected() const;
  /// Connected components as sorted vertex sets.
  std::vector<VertexSet> components() const;

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<int>> adj_;
  std::optional<Rotation> rotation_;
};

// ── Separations ──────────────────────────────────────────────────

struct Separation {
  VertexSet a;
  VertexSet b;
};

struct SeparationReport {
  bool valid = false;
  std::string violation;            // empty when valid
  std::optional<Edge> witness_edge; // crossing edge, if that is the failure
};

/// Checks A ∪ B = V, both strict sides nonempty, and no edge between
/// A∖B and B∖A. Vertex ids out of range throw std::invalid_argument.
SeparationReport validate_separation(const Graph& g, const Separation& s);

// ── Tree decompositions ──────────────────────────────────────────

/// Rooted tree decomposition: parent[i] == -1 marks the root. The
/// optional difficult sets mirror the bags (one per node, possibly
/// empty), each a subset of its bag.
struct TreeDecomposition {
  std::vector<int> parent;
  std::vector<VertexSet> bags;
  std::vector<VertexSet> difficult;  // empty, or one entry per node

  int num_nodes() const { return static_cast<int>(parent.size()); }
  int root() const;
  std::vector<std::vector<int>> children() const;
};

struct TdReport {
  bool valid = false;
  int max_bag_size = 0;
  std::string violated_condition;  // empty when valid
};

/// Validates both tree-decomposition axioms for G restricted to the
/// union of bags and reports the maximum bag size.
TdReport validate_tree_decomposition(const Graph& g, const TreeDecomposition& td);

struct BagPatternStats {
  int max_bag_intersection = 0;  // max over bags of |bag ∩ N^d[Z]|
  bool pattern_covered = false;  // Z ⊆ union of bags
};

BagPatternStats bag_pattern_stats(const TreeDecomposition& td, const Graph& g,
                                  const VertexSet& z, int d);

// ── Neighborhoods and distances ──────────────────────────────────

/// N^d_G[S]: all vertices within distance d of S. N^0[S] = S.
VertexSet neighborhood(const Graph& g, const VertexSet& s, int d);

/// BFS distances from the set `sources`; -1 for unreachable vertices.
/// Vertices with deleted[v] != 0 are treated as absent (sources in the
/// deleted set are ignored).
std::vector<int> bfs_distances(const Graph& g, const VertexSet& sources,
                               const std::vector<char>* deleted = nullptr);

// ── Contraction ──────────────────────────────────────────────────

struct Contraction {
  Graph graph;
  int merged_vertex = -1;
  std::vector<int> remap;  // old id -> new id (members of S map to merged_vertex)
};

/// Contracts the connected set S to a single vertex and simplifies.
/// Surviving vertices keep their relative order and occupy 0..n'-2;
/// the merged vertex gets id n'-1. Throws on empty or disconnected S.
/// The rotation system, if any, is dropped (see planar.hpp for the
/// embedding-preserving variant).
Contraction contract_set(const Graph& g, const VertexSet& s);

// ── Clusters ─────────────────────────────────────────────────────

struct ClusterFamily {
  std::vector<VertexSet> clusters;
  int diameter_bound = 0;
};

/// True iff G[K] is connected with diameter at most d.
bool is_d_cluster(const Graph& g, const VertexSet& k, int d);

// ── Small set helpers (sorted unique vectors) ────────────────────

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool set_contains(const VertexSet& a, int v);
bool is_subset(const VertexSet& a, const VertexSet& b);
VertexSet normalized(VertexSet v);  // sort + unique

}  // namespace sparsetd
