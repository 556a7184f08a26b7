#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsetd/graph.hpp"
#include "sparsetd/improve.hpp"
#include "sparsetd/rng.hpp"

namespace sparsetd {

struct DecomposeConfig {
  int k = 4;
  int d = 0;
  int h = 6;
  int kappa = 4;  // full pipeline only for k >= kappa
  double xi_mult = 1.0;
  double dist_p_scale = 1.0;
  double dist_q_scale = 1.0;
  double cdp = 8.0;  // constant of the bag-size formulas
  long enum_budget = 300000;

  ImproveConfig improve_config() const {
    ImproveConfig ic;
    ic.d = d;
    ic.h = h;
    ic.c = 3 * (2 * d + 1);  // c_F = 3 from the three-path construction
    ic.xi_mult = xi_mult;
    ic.dist_p_scale = dist_p_scale;
    ic.dist_q_scale = dist_q_scale;
    ic.enum_budget = enum_budget;
    return ic;
  }
};

struct DecompositionResult {
  VertexSet retained;  // the vertex set of G'
  TreeDecomposition td;
  int max_depth = 0;
  int lambda_r = 0;
  int lambda_c = 0;
  int rich_calls = 0;
  int pattern_actions = 0;
  int leaf_calls = 0;
};

struct RunFailure {
  std::string stage;
  ImproveFailure cause = ImproveFailure::DepthExceeded;
  std::optional<MinorWitness> witness;
};

struct DecomposeOutcome {
  std::optional<DecompositionResult> result;
  std::optional<RunFailure> failure;
  bool ok() const { return result.has_value(); }
};

/// Bag-size caps of the recursion, from the configured constant:
/// lambda_r bounds |R|, lambda_c bounds |C|; every bag fits in
/// lambda_r + lambda_c.
int lambda_r_bound(const DecomposeConfig& cfg, int diameter);
int lambda_c_bound(const DecomposeConfig& cfg, int diameter);

/// The five-mode recursion on a connected embedded planar graph of
/// bounded diameter. Y0 is forced into the root bag and its
/// d-neighborhood into G'.
DecomposeOutcome decompose_bounded_diameter(const Graph& g,
                                            const DecomposeConfig& cfg,
                                            const VertexSet& y0, SplitRng rng);

/// Baker layering wrapper: splits each component into slabs of radius
/// at most k (or (d+1)k for d >= 1) around a random layer remainder,
/// decomposes each slab, and concatenates the results.
DecomposeOutcome baker_decompose(const Graph& g, const DecomposeConfig& cfg,
                                 SplitRng rng);

/// One per outer node: an induced subgraph of the torso (by vertex set)
/// and its tree decomposition.
struct GluePiece {
  VertexSet vertices;
  TreeDecomposition td;
};

struct GlueResult {
  VertexSet retained;
  TreeDecomposition td;
};

/// Glues per-node decompositions along a rooted outer decomposition;
/// bag growth is bounded by the maximum adhesion size.
GlueResult glue(const Graph& g, const TreeDecomposition& outer,
                const std::vector<GluePiece>& pieces);

}  // namespace sparsetd
