// Acceptance suite: runs every gate criterion at its pinned threshold
// and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sparsetd/decompose.hpp"
#include "sparsetd/distance.hpp"
#include "sparsetd/flow.hpp"
#include "sparsetd/improve.hpp"
#include "sparsetd/io.hpp"
#include "sparsetd/oracle.hpp"
#include "sparsetd/planar.hpp"
#include "sparsetd/structure.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace sparsetd;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
             .count() /
         1000.0;
}

Graph random_connected_graph(int n, int extra, SplitRng& rng) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(rng.uniform(v), v);
  for (int i = 0; i < extra; ++i) {
    int u = rng.uniform(n), v = rng.uniform(n);
    if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::from_edges(n, edges);
}

VertexSet random_subset(int n, int m, SplitRng& rng) {
  VertexSet all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int i = 0; i < m && i < n; ++i) {
    int j = i + rng.uniform(n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(std::min(m, n));
  return normalized(all);
}

// ── Criterion 1: (p,q)-structure axioms on random graphs ──────────

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  SplitRng rng(101);
  int runs = 0, good = 0;
  for (int i = 0; i < 200; ++i) {
    Graph g = random_connected_graph(5 + rng.uniform(36), rng.uniform(30), rng);
    int s = 0, t = g.num_vertices() - 1;
    for (int q : {2, 5, 10}) {
      ++runs;
      PQStructure pq = pq_structure(g, s, t, q);
      if (verify_pq_structure(g, s, t, pq).valid) ++good;
    }
  }
  double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "(p,q)-structure axioms: %d/%d verified over 200 graphs, q in "
                "{2,5,10} (%.1f s)",
                good, runs, secs);
  report(1, good == runs && secs < 60.0, buf);
}

// ── Criterion 2: hand-forced duals ─────────────────────────────────

void criterion2() {
  bool ok = true;
  {
    Graph g = Graph::from_edges(2, {{0, 1}});
    PQStructure pq = pq_structure(g, 0, 1, 3);
    ok = ok && pq.p == 0 && static_cast<int>(pq.paths.size()) == 3;
  }
  {
    Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
    PQStructure pq = pq_structure(g, 0, 2, 2);
    ok = ok && pq.p == 1 && pq.separators.size() == 1 &&
         pq.separators[0] == VertexSet{1};
  }
  {
    Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    PQStructure pq = pq_structure(g, 0, 3, 2);
    ok = ok && pq.p == 2 && pq.separators.size() == 2 &&
         pq.separators[0] == VertexSet{1} && pq.separators[1] == VertexSet{2};
  }
  report(2, ok, "hand-forced duals reproduce exactly (K2 p=0; s-v-t p=1; "
                "s-v1-v2-t p=2)");
}

// ── Criterion 3: known-set duality guarantee ───────────────────────

void criterion3() {
  SplitRng rng(103);
  int good = 0;
  const int instances = 100;
  for (int i = 0; i < instances; ++i) {
    Graph g = random_connected_graph(8 + rng.uniform(24), rng.uniform(22), rng);
    const int n = g.num_vertices();
    int s = 0, t = n - 1;
    int k = 1 + rng.uniform(4);
    VertexSet z0 =
        set_difference(random_subset(n, rng.uniform(5), rng), VertexSet{s, t});
    int k0 = static_cast<int>(z0.size());
    int p = 1 + rng.uniform(4);
    int q = k + (k0 + p - 1) / p + 1 + rng.uniform(3);
    VertexSet z = set_difference(random_subset(n, k, rng), VertexSet{s, t});
    auto oc = dual1_outcome(g, s, t, z0, p, q, k);
    bool found = false;
    if (oc.is_chain) {
      for (const auto& c : oc.chain) {
        bool zc = static_cast<long>(set_intersection(z, c).size()) * p <=
                  2L * static_cast<long>(z.size());
        bool z0c =
            static_cast<long>(set_intersection(z0, c).size()) * p <= 2L * k0;
        if (zc && z0c && static_cast<int>(c.size()) <= 2 * q) found = true;
      }
    } else {
      for (std::size_t j = 0; j < oc.paths.size(); ++j) {
        if (static_cast<int>(oc.qsets[j].size()) > 5 * p + 2) continue;
        VertexSet pv = normalized(
            VertexSet(oc.paths[j].begin(), oc.paths[j].end()));
        if (set_intersection(set_difference(pv, oc.qsets[j]),
                             set_union(z, z0))
                .empty())
          found = true;
      }
    }
    if (found) ++good;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf,
                "known-set duality guarantee held on %d/%d planted instances",
                good, instances);
  report(3, good == instances, buf);
}

// ── Criterion 4: distance duality determinism ──────────────────────

void criterion4() {
  bool ok = true;
  std::string why = "all fixtures clean";
  int checked = 0;
  try {
    for (int d : {1, 2}) {
      // Shortcut fixtures: ladders and grids, with and without X.
      for (auto gf : {generate_grid(2, 8), generate_grid(3, 6),
                      generate_grid(4, 5)}) {
        const Graph& g = gf.graph;
        int s = 0, t = g.num_vertices() - 1;
        PQStructure pq = pq_structure(g, s, t, 3);
        DistanceDualParams params;
        params.d = d;
        params.r = std::max(2 * d, pq.p);
        params.q = 3;
        auto out = shortcut_paths(g, s, t, {}, {s}, pq, params);
        for (std::size_t i = 0; i < out.paths.size(); ++i) {
          ++checked;
          if (static_cast<int>(out.qsets[i].size()) > 10 * d * params.r) {
            ok = false;
            why = "shortcut Q over budget";
          }
          // Per-ball bound: at most 2d+1 path vertices per public/Z0 ball
          // (also asserted inside the construction).
        }
      }
      // Reweighted fixtures: long path and long ladder chains.
      {
        const int n = 60;
        Graph path = generate_path(n).graph;
        std::vector<VertexSet> chain;
        for (int v = 1; v + 1 < n; ++v) chain.push_back({v});
        DistanceDualParams params;
        params.d = d;
        params.q = 2;
        auto out = reweighted_chain(path, 0, n - 1, {}, chain, params);
        checked += static_cast<int>(out.separators.size());
        for (long w : out.weights)
          if (w > 2 * params.q) {
            ok = false;
            why = "reweighted weight over 2q";
          }
        // Disjointness and the distance gap are asserted inside the
        // construction; re-check pairwise distances here.
        for (std::size_t i = 0; i < out.separators.size() && ok; ++i) {
          auto dist = bfs_distances(path, out.separators[i]);
          for (std::size_t j = i + 1; j < out.separators.size(); ++j)
            for (int v : out.separators[j])
              if (dist[v] <= d) {
                ok = false;
                why = "reweighted separators too close";
              }
        }
      }
      {
        const int cols = 70;
        Graph ladder = generate_grid(2, cols).graph;
        std::vector<VertexSet> chain;
        for (int c = 1; c + 1 < cols; ++c)
          chain.push_back(normalized({c, cols + c}));
        DistanceDualParams params;
        params.d = d;
        params.q = 2;
        auto out =
            reweighted_chain(ladder, 0, cols - 1, {}, chain, params);
        checked += static_cast<int>(out.separators.size());
        for (long w : out.weights)
          if (w > 2 * params.q) {
            ok = false;
            why = "ladder reweighted weight over 2q";
          }
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    why = std::string("exception: ") + e.what();
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "distance duality deterministic bounds (%d structures, d in "
                "{1,2}): %s",
                checked, why.c_str());
  report(4, ok && checked > 0, buf);
}

// ── Criterion 5: improvement guarantees over 10^4 runs ─────────────

void criterion5() {
  auto t0 = std::chrono::steady_clock::now();
  GraphFile gf = generate_grid(8, 8);
  auto sd = three_path_decomposition(gf.graph, 0);
  std::vector<double> mu(gf.graph.num_vertices(), 1.0);
  CandidateSeparation cand = balanced_node_for_weight(sd, gf.graph, mu);
  const Graph& host = sd.host;
  VertexSet z0{0, 9, 18, 27};
  ImproveConfig cfg;
  const int runs = 10000;
  int ok_runs = 0, failures = 0, witnesses = 0, violations = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+:ok_runs,failures,witnesses,violations)
#endif
  for (int seed = 0; seed < runs; ++seed) {
    SplitRng rng(seed);
    try {
      auto res = improve_sample(host, 9, z0, cand, cfg, rng);
      if (!res.ok()) {
        ++failures;
        if (res.failure == ImproveFailure::MinorFound) ++witnesses;
        continue;
      }
      const auto& t = *res.tuple;
      VertexSet cut = set_intersection(t.sep.a, t.sep.b);
      bool good = is_subset(t.c_tilde, t.c) && is_subset(t.c, cut) &&
                  static_cast<int>(t.c.size()) <= res.caps.cap_c &&
                  static_cast<int>(t.c_tilde.size()) <= res.caps.cap_c_tilde &&
                  validate_separation(host, t.sep).valid;
      for (int v : set_intersection(cut, neighborhood(host, z0, cfg.d)))
        if (!set_contains(t.c, v)) good = false;
      if (good)
        ++ok_runs;
      else
        ++violations;
    } catch (const std::exception&) {
      ++violations;
    }
  }
  double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "improvement contract on 8x8 grid: %d ok, %d sampling "
                "failures, %d violations, %d minor witnesses over %d runs "
                "(%.1f s)",
                ok_runs, failures, violations, witnesses, runs, secs);
  report(5, violations == 0 && witnesses == 0 && ok_runs > 0, buf);
}

// ── Criterion 6: sampling/enumeration coherence ────────────────────

void criterion6() {
  struct Instance {
    Graph g;
    int k;
    VertexSet z0;
  };
  std::vector<Instance> instances;
  instances.push_back({generate_path(9).graph, 2, {}});
  instances.push_back({generate_path(15).graph, 2, {3}});
  instances.push_back({generate_grid(3, 4).graph, 2, {0, 11}});
  instances.push_back({generate_grid(3, 5).graph, 2, {}});
  instances.push_back({generate_random_maximal_planar(12, 5).graph, 2, {4}});
  int member = 0, sampled = 0;
  bool all_enumerated = true;
  for (auto& inst : instances) {
    auto sd = three_path_decomposition(inst.g, 0);
    std::vector<double> mu(inst.g.num_vertices(), 1.0);
    CandidateSeparation cand = balanced_node_for_weight(sd, inst.g, mu);
    if (cand.degenerate) continue;
    ImproveConfig cfg;
    cfg.enum_budget = 5000000;
    ImproveFamily fam =
        improve_enumerate(sd.host, inst.k, inst.z0, cand, cfg);
    if (fam.budget_exceeded) {
      all_enumerated = false;
      continue;
    }
    for (int seed = 0; seed < 100; ++seed) {
      SplitRng rng(seed);
      auto res = improve_sample(sd.host, inst.k, inst.z0, cand, cfg, rng);
      if (!res.ok()) continue;
      ++sampled;
      for (const auto& t : fam.tuples)
        if (t == *res.tuple) {
          ++member;
          break;
        }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "sampling/enumeration coherence: %d/%d sampled tuples in the "
                "enumerated family%s",
                member, sampled,
                all_enumerated ? "" : " (budget exceeded on an instance)");
  report(6, all_enumerated && sampled > 0 && member == sampled, buf);
}

// ── Criterion 7: decomposer determinism over the corpus ────────────

void criterion7() {
  struct Fixture {
    GraphFile gf;
    int k;
    int d;
  };
  std::vector<Fixture> corpus;
  corpus.push_back({generate_grid(4, 4), 4, 0});
  corpus.push_back({generate_grid(6, 6), 4, 0});
  corpus.push_back({generate_grid(8, 8), 9, 0});
  corpus.push_back({generate_grid(10, 10), 9, 0});
  corpus.push_back({generate_path(50), 4, 0});
  corpus.push_back({generate_cylinder(4, 8), 5, 0});
  corpus.push_back({generate_random_maximal_planar(40, 11), 6, 0});
  corpus.push_back({generate_grid(6, 6), 4, 1});
  corpus.push_back({generate_grid(10, 10), 4, 1});
  int runs = 0, valid_runs = 0, run_failures = 0;
  double worst = 0;
  std::string why = "all checks green";
  bool ok = true;
  for (auto& fx : corpus) {
    DecomposeConfig cfg;
    cfg.k = fx.k;
    cfg.d = fx.d;
    for (int seed = 0; seed < 25; ++seed) {
      ++runs;
      auto t0 = std::chrono::steady_clock::now();
      auto out = baker_decompose(fx.gf.graph, cfg, SplitRng(seed));
      double secs = seconds_since(t0);
      worst = std::max(worst, secs);
      if (secs >= 2.0) {
        ok = false;
        why = "a run took 2 s or more";
      }
      if (!out.ok()) {
        ++run_failures;
        if (out.failure->cause == ImproveFailure::MinorFound) {
          ok = false;
          why = "minor witness on planar input";
        }
        continue;
      }
      const auto& res = *out.result;
      auto rep = validate_tree_decomposition(fx.gf.graph, res.td);
      if (!rep.valid) {
        ok = false;
        why = "invalid decomposition: " + rep.violated_condition;
        continue;
      }
      if (rep.max_bag_size > res.lambda_r + res.lambda_c) {
        ok = false;
        why = "bag over the lambda cap";
        continue;
      }
      int cap = static_cast<int>(std::ceil(
          5.0 * std::log(std::max(fx.gf.graph.num_vertices(), 2)) /
          std::log(7.0 / 6.0)));
      if (res.max_depth > cap) {
        ok = false;
        why = "recursion deeper than 5*log_{7/6} n";
        continue;
      }
      ++valid_runs;
    }
    // Root-bag and Y0 guarantees of the bounded-diameter recursion.
    if (fx.gf.graph.connected()) {
      DecomposeConfig cfg2;
      cfg2.k = fx.k;
      cfg2.d = fx.d;
      VertexSet y0{0, fx.gf.graph.num_vertices() / 2};
      for (int seed = 0; seed < 10; ++seed) {
        auto out = decompose_bounded_diameter(fx.gf.graph, cfg2, y0,
                                              SplitRng(1000 + seed));
        if (!out.ok()) continue;
        int root = out.result->td.root();
        if (!is_subset(y0, out.result->td.bags[root])) {
          ok = false;
          why = "root bag misses R";
        }
        VertexSet ball = neighborhood(fx.gf.graph, y0, fx.d);
        if (!is_subset(ball, out.result->retained)) {
          ok = false;
          why = "N^d[Y0] not retained";
        }
        if (fx.d >= 1) {
          // Per-bag Y0-ball cap: (sqrt(k) + lg(k+diam)) * lg(k+diam),
          // multiplier 1 (pinned by the pilot sweep, observed max 6).
          int diam = 2 * (fx.d + 1) * fx.k + 2;
          int cap_y0 = static_cast<int>(std::ceil(
              (std::sqrt(double(fx.k)) + std::log2(double(fx.k + diam))) *
              std::log2(double(fx.k + diam))));
          for (const auto& bag : out.result->td.bags)
            if (static_cast<int>(set_intersection(bag, ball).size()) > cap_y0) {
              ok = false;
              why = "bag meets N^d[Y0] above the cap";
            }
        }
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "decomposer guarantees: %d valid, %d run-failures over %d "
                "corpus runs, slowest %.2f s: %s",
                valid_runs, run_failures, runs, worst, why.c_str());
  report(7, ok && valid_runs > 0, buf);
}

// ── Criterion 8: Monte-Carlo pattern success, d = 0 ────────────────

void criterion8() {
  auto t0 = std::chrono::steady_clock::now();
  GraphFile gf = generate_grid(10, 10);
  DecomposeConfig cfg;
  cfg.k = 9;
  PlantedPattern pattern;
  pattern.d = 0;
  SplitRng zr(888);
  pattern.z = random_subset(100, 9, zr);
  McThresholds th{6};  // pinned by the pilot sweep: successes peak at <= 4
  auto rep = monte_carlo_success(gf.graph, cfg, pattern, 2000, th, 42, true);
  double secs = seconds_since(t0);
  char buf[220];
  std::string seeds;
  for (std::size_t i = 0; i < rep.successful_trials.size() && i < 8; ++i)
    seeds += (i ? "," : "") + std::to_string(rep.successful_trials[i]);
  std::snprintf(buf, sizeof buf,
                "d=0 pattern success on 10x10 grid, k=9, |Z|=9: %d/%d "
                "(rate %.3f, threshold 6, first seeds [%s], %.1f s)",
                rep.successes, rep.trials,
                double(rep.successes) / rep.trials, seeds.c_str(), secs);
  report(8, rep.successes >= 1 && secs < 300.0, buf);
}

// ── Criterion 9: Monte-Carlo pattern success, d = 1 ────────────────

void criterion9() {
  auto t0 = std::chrono::steady_clock::now();
  GraphFile gf = generate_grid(10, 10);
  DecomposeConfig cfg;
  cfg.k = 4;
  cfg.d = 1;
  ClusterFamily fam;
  fam.diameter_bound = 1;
  fam.clusters = {{11, 12}, {17, 27}, {72, 82}, {66, 67}};
  auto disj = disjoint_clusters(gf.graph, fam);
  PlantedPattern pattern;
  pattern.d = 1;
  pattern.clusters = disj.clusters;
  // Configured sparsity bound: ceil(sqrt(k)*lg k + (diam+1)/sqrt(k))
  // with the slab diameter 2(d+1)k.
  int diam = 2 * (cfg.d + 1) * cfg.k;
  int bound = static_cast<int>(
      std::ceil(std::sqrt(double(cfg.k)) * std::log2(double(cfg.k)) +
                (diam + 1) / std::sqrt(double(cfg.k))));
  McThresholds th{bound};
  auto rep = monte_carlo_success(gf.graph, cfg, pattern, 5000, th, 43, true);
  double secs = seconds_since(t0);
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "d=1 pattern success on 10x10 grid, k=4, 4 clusters: %d/%d "
                "(rate %.3f, bound %d, %d run-failures, %.1f s)",
                rep.successes, rep.trials,
                double(rep.successes) / rep.trials, bound, rep.run_failures,
                secs);
  report(9, rep.successes >= 1 && secs < 600.0, buf);
}

// ── Criterion 10: oracle cross-checks ──────────────────────────────

void criterion10() {
  bool ok = true;
  std::string why = "treewidth and minor oracles agree";
  std::vector<GraphFile> small = {
      generate_grid(3, 3),          generate_grid(2, 5),
      generate_grid(2, 6),          generate_path(10),
      generate_cylinder(3, 4),      generate_random_maximal_planar(10, 4),
      generate_random_maximal_planar(11, 9)};
  const long budget = 2000000000;
  for (auto& gf : small) {
    if (gf.graph.num_vertices() <= 12) {
      auto sd = three_path_decomposition(gf.graph, 0);
      int max_bag = 0;
      for (const auto& b : sd.td.bags)
        max_bag = std::max(max_bag, static_cast<int>(b.size()));
      if (exact_treewidth(gf.graph) > max_bag - 1) {
        ok = false;
        why = "three-path bags below the exact treewidth";
      }
    }
    if (find_minor_model(gf.graph, {MinorSpec::Kind::Clique, 5}, budget) ||
        find_minor_model(gf.graph, {MinorSpec::Kind::Biclique3, 3}, budget)) {
      ok = false;
      why = "forbidden minor reported on an embedded graph";
    }
  }
  report(10, ok, "oracle cross-checks on the embedded corpus: " + why);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
