#pragma once

#include <optional>
#include <vector>

#include "sparsetd/graph.hpp"
#include "sparsetd/rng.hpp"
#include "sparsetd/structure.hpp"

namespace sparsetd {

/// Forest over a separator with a per-component guess of how much
/// pattern mass the component carries. Components are kept sorted by
/// their smallest vertex; zeta is aligned with them.
struct AnnotatedForest {
  VertexSet support;
  std::vector<Edge> edges;
  std::vector<VertexSet> comps;
  std::vector<int> zeta;
};

/// Builds the component structure from a support set and forest edges;
/// zeta entries follow the component order (smallest vertex first).
AnnotatedForest make_annotated_forest(const VertexSet& support,
                                      const std::vector<Edge>& edges,
                                      const std::vector<int>& zeta);

struct ZSplitResult {
  bool available = false;
  AnnotatedForest forest;
};

/// Splits the heaviest component at a random edge and re-guesses the
/// two halves (each at least ceil(zeta/(delta+1))). Unavailable when
/// the heaviest component has zeta <= 1, no edge, or an empty range.
ZSplitResult z_split(const AnnotatedForest& af, int delta, SplitRng& rng);

struct ImproveTuple {
  Separation sep;
  VertexSet c;
  VertexSet c_tilde;

  bool operator==(const ImproveTuple& o) const {
    return sep.a == o.sep.a && sep.b == o.sep.b && c == o.c &&
           c_tilde == o.c_tilde;
  }
  bool operator<(const ImproveTuple& o) const {
    if (sep.a != o.sep.a) return sep.a < o.sep.a;
    if (sep.b != o.sep.b) return sep.b < o.sep.b;
    if (c != o.c) return c < o.c;
    return c_tilde < o.c_tilde;
  }
};

struct ImproveConfig {
  int d = 0;
  int h = 6;
  int c = 3;  // ball-intersection constant of the supplied forest
  double xi_mult = 1.0;
  double dist_p_scale = 1.0;
  double dist_q_scale = 1.0;
  long enum_budget = 300000;
};

/// Resolved bounds and parameters, echoed with every result.
struct ImproveCaps {
  int xi = 0;
  int p_used = 0;
  int q_used = 0;
  int qset_max = 0;   // per-path Q budget
  int cap_c = 0;
  int cap_c_tilde = 0;
  int cap_nv = 0;
};

enum class ImproveFailure {
  DepthExceeded,
  NoEligiblePath,
  SplitUnavailable,
  DegenerateSeparation,
  MinorFound,
};

/// Raised instead of a tuple when the internal loop exhausts all
/// component pairs with path outcomes; on minor-free inputs this
/// indicates a bug, so the branch sets and connecting paths are kept.
struct MinorWitness {
  std::vector<VertexSet> branch_sets;
  std::vector<std::vector<int>> connecting_paths;
};

struct ImproveResult {
  std::optional<ImproveTuple> tuple;
  ImproveFailure failure = ImproveFailure::DepthExceeded;
  std::optional<MinorWitness> witness;
  ImproveCaps caps;

  bool ok() const { return tuple.has_value(); }
};

/// Samples one improvement tuple for the separation sep0 (with its
/// spanning forest). When (W, theta) is supplied the W-balance
/// |A∩W|, |B∩W| >= theta holds on every successful return.
ImproveResult improve_sample(const Graph& g, int k, const VertexSet& z0,
                             const CandidateSeparation& sep0,
                             const ImproveConfig& cfg, SplitRng& rng,
                             const VertexSet* w = nullptr, int theta = 0);

struct ImproveFamily {
  std::vector<ImproveTuple> tuples;  // deduplicated
  long leaves = 0;
  bool budget_exceeded = false;
  ImproveCaps caps;
};

/// Replaces every random guess by branching and collects all reachable
/// tuples. Every improve_sample outcome on the same input occurs in
/// the family.
ImproveFamily improve_enumerate(const Graph& g, int k, const VertexSet& z0,
                                const CandidateSeparation& sep0,
                                const ImproveConfig& cfg);

}  // namespace sparsetd
