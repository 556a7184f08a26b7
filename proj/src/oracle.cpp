#include "sparsetd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "sparsetd/structure.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sparsetd {

// ── Exact treewidth ──────────────────────────────────────────────

namespace {

/// Number of vertices outside S ∪ {v} adjacent to v or connected to v
/// through S.
int fill_degree(const Graph& g, unsigned s_mask, int v) {
  const int n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(v);
  seen[v] = 1;
  int count = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.neighbors(u)) {
      if (seen[w]) continue;
      seen[w] = 1;
      if (s_mask & (1u << w))
        q.push(w);  // pass through eliminated vertices
      else
        ++count;
    }
  }
  return count;
}

}  // namespace

int exact_treewidth(const Graph& g) {
  const int n = g.num_vertices();
  if (n > 12) throw std::invalid_argument("exact_treewidth: more than 12 vertices");
  if (n == 0) return -1;
  std::vector<int> best(1u << n, 0);
  for (unsigned s = 1; s < (1u << n); ++s) {
    int value = n;
    for (int v = 0; v < n; ++v) {
      if (!(s & (1u << v))) continue;
      unsigned rest = s & ~(1u << v);
      int cand = std::max(best[rest], fill_degree(g, rest, v));
      value = std::min(value, cand);
    }
    best[s] = value;
  }
  return best[(1u << n) - 1];
}

// ── Minor models ─────────────────────────────────────────────────

namespace {

struct MinorSearch {
  // Parts are searched in an order that gives every part after the
  // first an adjacency constraint against already-placed parts:
  // cliques plainly 0..h-1, bicliques interleaved L R L R L R R ...
  // Within each symmetry group, parts are canonicalized by ascending
  // minimum vertex (the seed is the minimum of its part).
  const Graph& g;
  const MinorSpec& spec;
  long budget;
  int n;
  int parts;
  std::vector<char> is_left;       // per search position
  std::vector<int> prev_in_group;  // previous position of the same group
  std::vector<int> assign;         // -1 free, else part position
  std::vector<VertexSet> chosen;   // branch sets by position
  long nodes = 0;

  MinorSearch(const Graph& g_, const MinorSpec& spec_, long budget_)
      : g(g_), spec(spec_), budget(budget_), n(g_.num_vertices()) {
    parts = spec.kind == MinorSpec::Kind::Clique ? spec.h : 3 + spec.h;
    assign.assign(n, -1);
    is_left.assign(parts, 0);
    prev_in_group.assign(parts, -1);
    if (spec.kind == MinorSpec::Kind::Clique) {
      for (int i = 1; i < parts; ++i) prev_in_group[i] = i - 1;
    } else {
      // Alternate the groups while both still have parts to place.
      int lefts_todo = 3, rights_todo = spec.h;
      int last_left = -1, last_right = -1;
      bool want_left = true;
      for (int i = 0; i < parts; ++i) {
        bool left = want_left ? lefts_todo > 0 : rights_todo == 0;
        is_left[i] = left ? 1 : 0;
        if (left) {
          --lefts_todo;
          prev_in_group[i] = last_left;
          last_left = i;
        } else {
          --rights_todo;
          prev_in_group[i] = last_right;
          last_right = i;
        }
        want_left = !left;
      }
    }
  }

  bool needs_edge(int i, int j) const {
    if (spec.kind == MinorSpec::Kind::Clique) return true;
    return is_left[i] != is_left[j];
  }

  void tick() {
    if (++nodes > budget)
      throw std::runtime_error("find_minor_model: budget exceeded");
  }

  /// Remaining right parts must fit into components of the free graph
  /// that touch all placed left parts; a component contributes at most
  /// its thinnest contact count.
  bool rights_feasible(int next_part) const {
    int remaining = parts - next_part;
    if (remaining <= 0) return true;
    std::vector<int> lefts;
    for (int i = 0; i < next_part && i < static_cast<int>(chosen.size()); ++i)
      if (is_left[i]) lefts.push_back(i);
    if (static_cast<int>(lefts.size()) < 3) return true;
    std::vector<char> seen(n, 0);
    long capacity = 0;
    for (int s0 = 0; s0 < n && capacity < remaining; ++s0) {
      if (assign[s0] != -1 || seen[s0]) continue;
      VertexSet comp;
      std::queue<int> q;
      q.push(s0);
      seen[s0] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        comp.push_back(v);
        for (int w : g.neighbors(v))
          if (assign[w] == -1 && !seen[w]) {
            seen[w] = 1;
            q.push(w);
          }
      }
      long contact = comp.size();
      for (int li : lefts) {
        long touch = 0;
        for (int v : comp) {
          for (int w : g.neighbors(v))
            if (set_contains(chosen[li], w)) {
              ++touch;
              break;
            }
        }
        contact = std::min(contact, touch);
      }
      capacity += contact;
    }
    return capacity >= remaining;
  }

  bool solve(int i) {
    if (i == parts) return true;
    tick();
    if (spec.kind == MinorSpec::Kind::Biclique3 && !is_left[i] &&
        !rights_feasible(i))
      return false;
    int min_seed = prev_in_group[i] < 0 ? 0 : chosen[prev_in_group[i]][0] + 1;
    for (int seed = min_seed; seed < n; ++seed) {
      if (assign[seed] != -1) continue;
      assign[seed] = i;
      chosen.push_back({seed});
      if (grow(i, {seed}, {}, seed)) return true;
      chosen.pop_back();
      assign[seed] = -1;
    }
    return false;
  }

  bool adjacent_sets(const VertexSet& a, const VertexSet& b) const {
    for (int u : a)
      for (int v : g.neighbors(u))
        if (set_contains(b, v)) return true;
    return false;
  }

  /// Grows part i (a connected set whose minimum stays `seed`) by
  /// include/exclude branching; each connected superset appears once.
  bool grow(int i, VertexSet current, VertexSet excluded, int seed) {
    tick();
    bool closable = true;
    for (int j = 0; j < i && closable; ++j)
      if (needs_edge(i, j) && !adjacent_sets(current, chosen[j]))
        closable = false;
    if (closable) {
      chosen[i] = current;
      if (solve(i + 1)) return true;
    }
    int pick = -1;
    for (int v : current) {
      for (int w : g.neighbors(v)) {
        if (assign[w] == -1 && w > seed && !set_contains(excluded, w)) {
          pick = w;
          break;
        }
      }
      if (pick >= 0) break;
    }
    if (pick < 0) return false;
    assign[pick] = i;
    if (grow(i, set_union(current, {pick}), excluded, seed)) return true;
    assign[pick] = -1;
    return grow(i, std::move(current), set_union(excluded, {pick}), seed);
  }

  /// The public layout lists the three left parts first.
  std::vector<VertexSet> in_public_order() const {
    if (spec.kind == MinorSpec::Kind::Clique) return chosen;
    std::vector<VertexSet> out;
    for (int i = 0; i < parts; ++i)
      if (is_left[i]) out.push_back(chosen[i]);
    for (int i = 0; i < parts; ++i)
      if (!is_left[i]) out.push_back(chosen[i]);
    return out;
  }
};

}  // namespace

bool validate_minor_model(const Graph& g, const MinorSpec& spec,
                          const std::vector<VertexSet>& branch_sets) {
  int parts = spec.kind == MinorSpec::Kind::Clique ? spec.h : 3 + spec.h;
  if (static_cast<int>(branch_sets.size()) != parts) return false;
  std::vector<char> used(g.num_vertices(), 0);
  for (const auto& b : branch_sets) {
    if (b.empty()) return false;
    for (int v : b) {
      if (v < 0 || v >= g.num_vertices() || used[v]) return false;
      used[v] = 1;
    }
    std::vector<char> outside(g.num_vertices(), 1);
    for (int v : b) outside[v] = 0;
    auto dist = bfs_distances(g, {b[0]}, &outside);
    for (int v : b)
      if (dist[v] < 0) return false;  // disconnected branch set
  }
  auto touching = [&](const VertexSet& a, const VertexSet& b) {
    for (int u : a)
      for (int v : g.neighbors(u))
        if (set_contains(b, v)) return true;
    return false;
  };
  for (int i = 0; i < parts; ++i)
    for (int j = i + 1; j < parts; ++j) {
      bool need = spec.kind == MinorSpec::Kind::Clique ? true : (i < 3) != (j < 3);
      if (need && !touching(branch_sets[i], branch_sets[j])) return false;
    }
  return true;
}

std::optional<std::vector<VertexSet>> find_minor_model(const Graph& g,
                                                       const MinorSpec& spec,
                                                       long budget) {
  if (g.num_vertices() > 16)
    throw std::invalid_argument("find_minor_model: more than 16 vertices");
  MinorSearch search(g, spec, budget);
  if (!search.solve(0)) return std::nullopt;
  auto model = search.in_public_order();
  if (!validate_minor_model(g, spec, model))
    throw std::logic_error("find_minor_model: produced an invalid model");
  return model;
}

// ── Monte-Carlo harness ──────────────────────────────────────────

VertexSet PlantedPattern::union_set() const {
  if (d == 0) return normalized(z);
  VertexSet u;
  for (const auto& k : clusters) u = set_union(u, normalized(k));
  return u;
}

SuccessReport monte_carlo_success(const Graph& g, const DecomposeConfig& cfg,
                                  const PlantedPattern& pattern, int trials,
                                  const McThresholds& thresholds,
                                  std::uint64_t seed, bool parallel) {
  SuccessReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.thresholds = thresholds;
  rep.per_trial_max_intersection.assign(trials, -1);

  VertexSet target = pattern.union_set();
  std::vector<int> status(trials, 0);  // 0 fail-run, 1 cover-miss, 2 sparse-miss, 3 ok

  SplitRng master(seed);
  auto run_one = [&](int t) {
    SplitRng trial_rng = master.split(static_cast<std::uint64_t>(t));
    DecomposeOutcome out = baker_decompose(g, cfg, trial_rng);
    if (!out.ok()) {
      status[t] = 0;
      return;
    }
    const auto& res = *out.result;
    auto stats = bag_pattern_stats(res.td, g, target, pattern.d);
    rep.per_trial_max_intersection[t] = stats.max_bag_intersection;
    bool covered = is_subset(target, res.retained);
    if (!covered) {
      status[t] = 1;
      return;
    }
    status[t] = stats.max_bag_intersection <= thresholds.sparsity ? 3 : 2;
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int t = 0; t < trials; ++t) run_one(t);
  } else {
    for (int t = 0; t < trials; ++t) run_one(t);
  }

  for (int t = 0; t < trials; ++t) {
    switch (status[t]) {
      case 0: ++rep.run_failures; break;
      case 1: ++rep.coverage_misses; break;
      case 2: ++rep.sparsity_misses; break;
      default:
        ++rep.successes;
        rep.successful_trials.push_back(t);
    }
  }
  return rep;
}

Item2Report verify_improve_item2(const Graph& g,
                                 const std::vector<VertexSet>& clusters,
                                 const ImproveTuple& tuple,
                                 const VertexSet& initial_cut, int k, int c,
                                 int d, int h, int bound) {
  (void)g;
  (void)d;  // item 2 counts pattern vertices directly, not their balls
  Item2Report rep;
  VertexSet pattern;
  for (const auto& cl : clusters) pattern = set_union(pattern, normalized(cl));
  VertexSet cut = set_intersection(normalized(tuple.sep.a), normalized(tuple.sep.b));
  VertexSet cut_pattern = set_intersection(cut, pattern);
  if (!is_subset(cut_pattern, tuple.c)) {
    rep.violation = "pattern vertex of A∩B outside C";
    return rep;
  }
  rep.c_pattern_intersection =
      static_cast<int>(set_intersection(tuple.c, pattern).size());
  if (rep.c_pattern_intersection > bound) {
    rep.violation = "C meets the pattern above the bound";
    return rep;
  }
  int meeting_initial = 0, meeting_c = 0;
  for (const auto& cl : clusters) {
    if (!set_intersection(normalized(cl), initial_cut).empty()) ++meeting_initial;
    if (!set_intersection(normalized(cl), tuple.c).empty()) ++meeting_c;
  }
  rep.clusters_meeting_c = meeting_c;
  double rich_threshold = double(h) * (h + 1) * std::sqrt(double(k));
  if (meeting_initial > rich_threshold) {
    if (double(meeting_c) < std::sqrt(double(k)) / c) {
      rep.violation = "rich case: too few clusters meet C";
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

}  // namespace sparsetd
