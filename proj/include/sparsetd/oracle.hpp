#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsetd/decompose.hpp"
#include "sparsetd/graph.hpp"
#include "sparsetd/improve.hpp"

namespace sparsetd {

/// Exact treewidth by dynamic programming over vertex subsets.
/// Limited to 12 vertices.
int exact_treewidth(const Graph& g);

struct MinorSpec {
  enum class Kind { Clique, Biclique3 } kind = Kind::Clique;
  int h = 4;  // K_h, or K_{3,h} for Biclique3
};

/// Exhaustive branch-set search (size-capped, with a node budget).
/// Returns the branch sets of a valid model, or nullopt when none
/// exists. Throws when the graph is too large or the budget runs out.
std::optional<std::vector<VertexSet>> find_minor_model(const Graph& g,
                                                       const MinorSpec& spec,
                                                       long budget = 50000000);

/// True iff the branch sets form a valid model of the target minor.
bool validate_minor_model(const Graph& g, const MinorSpec& spec,
                          const std::vector<VertexSet>& branch_sets);

/// A planted pattern: a plain vertex set for d = 0, pairwise disjoint
/// d-clusters for d >= 1.
struct PlantedPattern {
  int d = 0;
  VertexSet z;                      // used when d == 0
  std::vector<VertexSet> clusters;  // used when d >= 1
  VertexSet union_set() const;
};

struct McThresholds {
  int sparsity = 0;  // max allowed |bag ∩ N^d[pattern]|
};

struct SuccessReport {
  int trials = 0;
  int successes = 0;
  int run_failures = 0;
  int coverage_misses = 0;
  int sparsity_misses = 0;
  std::vector<int> per_trial_max_intersection;  // -1 on run failure
  std::vector<int> successful_trials;
  std::uint64_t seed = 0;
  McThresholds thresholds;
};

/// Monte-Carlo harness over baker_decompose: per-trial seed substreams,
/// classification against the thresholds. `parallel` fans the trials
/// out with OpenMP; the report is identical either way.
SuccessReport monte_carlo_success(const Graph& g, const DecomposeConfig& cfg,
                                  const PlantedPattern& pattern, int trials,
                                  const McThresholds& thresholds,
                                  std::uint64_t seed, bool parallel = false);

struct Item2Report {
  bool ok = false;
  std::string violation;
  int c_pattern_intersection = 0;
  int clusters_meeting_c = 0;
};

/// Checks the pattern-facing guarantees of an improvement tuple against
/// a known cluster family: containment of the pattern part of A∩B in
/// C, the size bound on C ∩ ∪Z, and the rich conclusion when the
/// initial separator met many clusters.
Item2Report verify_improve_item2(const Graph& g,
                                 const std::vector<VertexSet>& clusters,
                                 const ImproveTuple& tuple,
                                 const VertexSet& initial_cut, int k, int c,
                                 int d, int h, int bound);

}  // namespace sparsetd
