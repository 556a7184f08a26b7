#pragma once

#include <string>
#include <vector>

#include "sparsetd/graph.hpp"

namespace sparsetd {

/// Face traversal convention: the directed edge (u,v) is followed by
/// (v,w) where w is the successor of u in the rotation at v. Faces are
/// the orbits of this map.

struct EmbeddingReport {
  bool valid = false;
  std::string violation;
};

/// Euler check: for every connected component, V - E + F = 2 with F
/// counted by face traversal. Requires a rotation system.
EmbeddingReport validate_embedding(const Graph& g);

/// Faces as closed vertex walks (one entry per directed edge, the walk
/// lists the tail of each arc in traversal order).
std::vector<std::vector<int>> face_walks(const Graph& g);

/// Maximal planar supergraph on the same vertex set: adds chords until
/// every face is a triangle, updating the rotation system. Requires a
/// valid embedding, a connected graph, and at least 3 vertices.
Graph triangulate(const Graph& g);

/// Embedding-preserving contraction of a connected set. Same id
/// conventions as contract_set; the result carries a valid rotation.
Contraction contract_set_embedded(const Graph& g, const VertexSet& s);

/// Adds a degree-1 vertex (id n) attached to `attach`, keeping the
/// embedding valid when one is present.
Graph add_pendant_vertex(const Graph& g, int attach);

/// Induced subgraph on keep[v] != 0; restricts the rotation system when
/// present. Mapping: to_sub[v] is the new id or -1.
struct InducedSubgraph {
  Graph graph;
  std::vector<int> to_sub;
  std::vector<int> to_full;
};
InducedSubgraph induce(const Graph& g, const std::vector<char>& keep);

}  // namespace sparsetd
