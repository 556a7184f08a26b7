#pragma once

#include <string>
#include <vector>

#include "sparsetd/graph.hpp"

namespace sparsetd {

/// A (p,q)-structure: a chain of (s,t)-separators C_1..C_p and q
/// (s,t)-paths such that every path meets every separator exactly once
/// (in chain order), path–path intersections lie on separators, and
/// every separator vertex lies on a path. Dual labels are kept for
/// inspection: y0/y1 are the labels of the cheap and expensive copy of
/// each vertex, z marks separator membership.
struct PQStructure {
  int p = 0;
  int q = 0;
  int s = -1;
  int t = -1;
  std::vector<VertexSet> separators;
  std::vector<std::vector<int>> paths;  // vertex sequences from s to t
  std::vector<int> y0, y1;              // -1 on s,t
  std::vector<char> z;
};

/// Min-cost-flow construction of a (p,q)-structure. s and t must be
/// distinct and connected; q must be positive.
PQStructure pq_structure(const Graph& g, int s, int t, int q);

struct PqVerification {
  bool valid = false;
  std::string violation;
};

/// Checks the three defining properties and the chain property against
/// the graph, by direct reachability tests.
PqVerification verify_pq_structure(const Graph& g, int s, int t,
                                   const PQStructure& pq);

/// Public vertices of path i: vertices (except s,t) shared with some
/// other path of the structure.
VertexSet public_vertices(const PQStructure& pq, int i);

struct Dual1Outcome {
  bool is_chain = false;
  std::vector<VertexSet> chain;          // C_1..C_p, each of size <= 2q
  std::vector<std::vector<int>> paths;   // eligible paths
  std::vector<VertexSet> qsets;          // Q_i ⊆ V(P_i), |Q_i| <= 5p+2
};

/// Known-set duality: runs pq_structure with the given q; a chain of at
/// least p separators is returned as-is (first p), otherwise the paths
/// are returned with Q_i = {s,t} ∪ publics ∪ (privates ∩ Z0). Paths
/// with more than p private Z0-vertices are dropped.
/// Requires q >= k + |Z0|/p + 1.
Dual1Outcome dual1_outcome(const Graph& g, int s, int t, const VertexSet& z0,
                           int p, int q, int k);

}  // namespace sparsetd
