#pragma once

#include <vector>

#include "sparsetd/flow.hpp"
#include "sparsetd/graph.hpp"

namespace sparsetd {

struct DistanceDualParams {
  int p = 1;
  int q = 2;
  int r = 1;   // Q-size budget factor; dual_distance sets r = p
  int d = 1;
  int h = 6;
  int lambda = 1;  // allowed number of components of G[X]
  int k = 1;
  int k0 = 0;
};

struct ShortcutPaths {
  std::vector<std::vector<int>> paths;  // P'_i, in G - X, from s to t
  std::vector<VertexSet> qsets;         // Q_i ⊆ V(P'_i), |Q_i| <= 10·d·r
  std::vector<int> source_index;        // index of the originating P_i
};

/// Path shortcutting with bounded ball intersection: each returned
/// path is a shortest s-t path inside the subgraph spanned by its
/// private vertices and the d-balls (in G-X) of its public vertices,
/// nearby Z0-vertices, s and t. Only indices with |Q_i| <= 10·d·r are
/// kept. Every kept path meets each of those balls in at most 2d+1
/// vertices (checked).
ShortcutPaths shortcut_paths(const Graph& g, int s, int t, const VertexSet& x,
                             const VertexSet& z0, const PQStructure& pq,
                             const DistanceDualParams& params);

struct ReweightedChain {
  std::vector<VertexSet> separators;  // C'_j, pairwise > d apart in G-X
  std::vector<long> weights;          // w_j(C'_j) <= 2q
  std::vector<int> source_index;      // ι(j), 1-based index into the input chain
};

/// Exponential-weight reweighting of a chain: picks indices ι(j) spaced
/// by ceil(2·log2(2q+1)+2d) and replaces each C_ι(j) by a minimum
/// weight (s,t)-vertex-separator under w_j(v) = 2^dist(v, C_ι(j))
/// capped at 2q+1. Throws when the index set is empty (raise p).
ReweightedChain reweighted_chain(const Graph& g, int s, int t,
                                 const VertexSet& x,
                                 const std::vector<VertexSet>& chain,
                                 const DistanceDualParams& params);

struct DistanceDualOutcome {
  bool is_chain = false;
  ReweightedChain chain;
  ShortcutPaths paths;
  int p0 = 0;  // chain length of the underlying (p0,q)-structure
};

/// Dispatcher: builds a (p0,q)-structure of (G-X, s, t); a long chain
/// is reweighted, a chain shorter than p leads to shortcut paths with
/// r = p.
DistanceDualOutcome dual_distance(const Graph& g, int s, int t,
                                  const VertexSet& x, const VertexSet& z0,
                                  const DistanceDualParams& params);

/// Minimum-weight (s,t)-vertex separator (weights on vertices, s and t
/// uncuttable) via node-split max flow. Vertices with deleted[v] != 0
/// are absent. Returns the cut and its weight.
std::pair<VertexSet, long> min_weight_vertex_cut(const Graph& g, int s, int t,
                                                 const std::vector<long>& weight,
                                                 const std::vector<char>* deleted = nullptr);

}  // namespace sparsetd
