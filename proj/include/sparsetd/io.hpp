#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "sparsetd/decompose.hpp"
#include "sparsetd/graph.hpp"
#include "sparsetd/oracle.hpp"

namespace sparsetd {

/// On-disk graph: vertex count, edge list, optional rotation system,
/// optional named vertex sets (Y0, planted patterns, clusters).
struct GraphFile {
  Graph graph;
  std::map<std::string, VertexSet> sets;
};

std::string emit_graph(const GraphFile& gf);
GraphFile parse_graph(const std::string& text);

/// Full run configuration; every field is echoed into reports.
struct RunConfig {
  DecomposeConfig decompose;
  std::uint64_t seed = 1;
  int trials = 100;
  int sparsity_threshold = 0;  // 0: use the formula bound
  bool parallel = false;

  /// Threshold used by bench when sparsity_threshold == 0:
  /// round(sparse_mult * (sqrt(k)*lg k + diam/sqrt(k)) * lg k extras).
  double sparse_mult = 1.0;
};

std::string emit_config(const RunConfig& cfg);
RunConfig parse_config(const std::string& text);

// ── Generators ───────────────────────────────────────────────────

GraphFile generate_grid(int rows, int cols);
GraphFile generate_cylinder(int rows, int cols);
GraphFile generate_path(int n);
GraphFile generate_random_maximal_planar(int n, std::uint64_t seed);

// ── Results ──────────────────────────────────────────────────────

std::string emit_decomposition(const DecomposeOutcome& out, const RunConfig& cfg,
                               const Graph& g);
struct ParsedDecomposition {
  bool ok = false;
  DecompositionResult result;
};
ParsedDecomposition parse_decomposition(const std::string& text);

std::string emit_success_report(const SuccessReport& rep, const RunConfig& cfg);

}  // namespace sparsetd
