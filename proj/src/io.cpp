#include "sparsetd/io.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "sparsetd/planar.hpp"
#include "sparsetd/rng.hpp"

namespace sparsetd {

using nlohmann::ordered_json;

namespace {

ordered_json vertex_set_json(const VertexSet& s) { return ordered_json(s); }

VertexSet vertex_set_from(const ordered_json& j) {
  VertexSet out;
  for (const auto& x : j) out.push_back(x.get<int>());
  return normalized(out);
}

}  // namespace

std::string emit_graph(const GraphFile& gf) {
  ordered_json j;
  j["schema"] = "sparsetd-graph-1";
  j["n"] = gf.graph.num_vertices();
  ordered_json edges = ordered_json::array();
  for (auto [u, v] : gf.graph.edge_list()) edges.push_back({u, v});
  j["edges"] = edges;
  if (gf.graph.has_rotation()) {
    ordered_json rot = ordered_json::array();
    for (const auto& r : gf.graph.rotation()) rot.push_back(r);
    j["rotation"] = rot;
  }
  if (!gf.sets.empty()) {
    ordered_json sets;
    for (const auto& [name, s] : gf.sets) sets[name] = vertex_set_json(s);
    j["sets"] = sets;
  }
  return j.dump(2) + "\n";
}

GraphFile parse_graph(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (!j.contains("schema") || j["schema"] != "sparsetd-graph-1")
    throw std::invalid_argument("graph file: unknown schema");
  GraphFile gf;
  int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  gf.graph = Graph::from_edges(n, edges);
  if (j.contains("rotation")) {
    Rotation rot;
    for (const auto& r : j["rotation"]) {
      std::vector<int> row;
      for (const auto& x : r) row.push_back(x.get<int>());
      rot.push_back(std::move(row));
    }
    gf.graph.set_rotation(std::move(rot));
    auto emb = validate_embedding(gf.graph);
    if (!emb.valid)
      throw std::invalid_argument("graph file: " + emb.violation);
  }
  if (j.contains("sets"))
    for (auto it = j["sets"].begin(); it != j["sets"].end(); ++it)
      gf.sets[it.key()] = vertex_set_from(it.value());
  return gf;
}

std::string emit_config(const RunConfig& cfg) {
  ordered_json j;
  j["schema"] = "sparsetd-config-1";
  j["k"] = cfg.decompose.k;
  j["d"] = cfg.decompose.d;
  j["h"] = cfg.decompose.h;
  j["kappa"] = cfg.decompose.kappa;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["sparsity_threshold"] = cfg.sparsity_threshold;
  j["parallel"] = cfg.parallel;
  ordered_json m;
  m["xi"] = cfg.decompose.xi_mult;
  m["dist_p"] = cfg.decompose.dist_p_scale;
  m["dist_q"] = cfg.decompose.dist_q_scale;
  m["cdp"] = cfg.decompose.cdp;
  m["sparse"] = cfg.sparse_mult;
  j["multipliers"] = m;
  j["enum_budget"] = cfg.decompose.enum_budget;
  return j.dump(2) + "\n";
}

RunConfig parse_config(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (!j.contains("schema") || j["schema"] != "sparsetd-config-1")
    throw std::invalid_argument("config file: unknown schema");
  RunConfig cfg;
  cfg.decompose.k = j.value("k", cfg.decompose.k);
  cfg.decompose.d = j.value("d", cfg.decompose.d);
  cfg.decompose.h = j.value("h", cfg.decompose.h);
  cfg.decompose.kappa = j.value("kappa", cfg.decompose.kappa);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.sparsity_threshold = j.value("sparsity_threshold", cfg.sparsity_threshold);
  cfg.parallel = j.value("parallel", cfg.parallel);
  if (j.contains("multipliers")) {
    const auto& m = j["multipliers"];
    cfg.decompose.xi_mult = m.value("xi", cfg.decompose.xi_mult);
    cfg.decompose.dist_p_scale = m.value("dist_p", cfg.decompose.dist_p_scale);
    cfg.decompose.dist_q_scale = m.value("dist_q", cfg.decompose.dist_q_scale);
    cfg.decompose.cdp = m.value("cdp", cfg.decompose.cdp);
    cfg.sparse_mult = m.value("sparse", cfg.sparse_mult);
  }
  cfg.decompose.enum_budget = j.value("enum_budget", cfg.decompose.enum_budget);
  if (cfg.decompose.k < 2) throw std::invalid_argument("config: k must be >= 2");
  if (cfg.decompose.d < 0) throw std::invalid_argument("config: d must be >= 0");
  return cfg;
}

// ── Generators ───────────────────────────────────────────────────

GraphFile generate_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid: sizes must be >= 1");
  const int n = rows * cols;
  auto id = [&](int r, int c) { return r * cols + c; };
  std::vector<Edge> edges;
  Rotation rot(n);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      // Clockwise: up, right, down, left — a consistent plane embedding.
      if (r > 0) rot[id(r, c)].push_back(id(r - 1, c));
      if (c + 1 < cols) {
        rot[id(r, c)].push_back(id(r, c + 1));
        edges.emplace_back(id(r, c), id(r, c + 1));
      }
      if (r + 1 < rows) {
        rot[id(r, c)].push_back(id(r + 1, c));
        edges.emplace_back(id(r, c), id(r + 1, c));
      }
      if (c > 0) rot[id(r, c)].push_back(id(r, c - 1));
    }
  }
  GraphFile gf;
  gf.graph = Graph::from_edges(n, edges);
  gf.graph.set_rotation(std::move(rot));
  return gf;
}

GraphFile generate_cylinder(int rows, int cols) {
  if (rows < 1 || cols < 3)
    throw std::invalid_argument("cylinder: needs cols >= 3");
  const int n = rows * cols;
  auto id = [&](int r, int c) { return r * cols + ((c % cols) + cols) % cols; };
  std::vector<Edge> edges;
  Rotation rot(n);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (r > 0) rot[id(r, c)].push_back(id(r - 1, c));
      rot[id(r, c)].push_back(id(r, c + 1));
      edges.emplace_back(std::min(id(r, c), id(r, c + 1)),
                         std::max(id(r, c), id(r, c + 1)));
      if (r + 1 < rows) {
        rot[id(r, c)].push_back(id(r + 1, c));
        edges.emplace_back(id(r, c), id(r + 1, c));
      }
      rot[id(r, c)].push_back(id(r, c - 1));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  GraphFile gf;
  gf.graph = Graph::from_edges(n, edges);
  gf.graph.set_rotation(std::move(rot));
  return gf;
}

GraphFile generate_path(int n) {
  if (n < 1) throw std::invalid_argument("path: n must be >= 1");
  std::vector<Edge> edges;
  Rotation rot(n);
  for (int i = 0; i + 1 < n; ++i) {
    edges.emplace_back(i, i + 1);
    rot[i].push_back(i + 1);
    rot[i + 1].push_back(i);
  }
  GraphFile gf;
  gf.graph = Graph::from_edges(n, edges);
  gf.graph.set_rotation(std::move(rot));
  return gf;
}

GraphFile generate_random_maximal_planar(int n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("random-maximal-planar: n must be >= 3");
  SplitRng rng(seed);
  // Start from a triangle and insert each new vertex into a random
  // face, connecting it to the three corners.
  struct Face {
    int a, b, c;
  };
  std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
  std::vector<Face> faces{{0, 1, 2}, {0, 2, 1}};
  Rotation rot(n);
  rot[0] = {1, 2};
  rot[1] = {2, 0};
  rot[2] = {0, 1};

  auto insert_after = [&](int at, int prev, int value) {
    auto it = std::find(rot[at].begin(), rot[at].end(), prev);
    rot[at].insert(it + 1, value);
  };

  for (int v = 3; v < n; ++v) {
    int fi = rng.uniform(static_cast<int>(faces.size()));
    Face f = faces[fi];
    edges.emplace_back(f.a, v);
    edges.emplace_back(f.b, v);
    edges.emplace_back(f.c, v);
    // Face (a,b,c) is a directed triangle walk a->b->c; placing v inside
    // splits it into (a,b,v), (b,c,v), (c,a,v).
    insert_after(f.a, f.c, v);
    insert_after(f.b, f.a, v);
    insert_after(f.c, f.b, v);
    rot[v] = {f.a, f.c, f.b};
    faces[fi] = {f.a, f.b, v};
    faces.push_back({f.b, f.c, v});
    faces.push_back({f.c, f.a, v});
  }
  GraphFile gf;
  gf.graph = Graph::from_edges(n, edges);
  gf.graph.set_rotation(std::move(rot));
  auto emb = validate_embedding(gf.graph);
  if (!emb.valid)
    throw std::logic_error("random_maximal_planar: " + emb.violation);
  return gf;
}

// ── Results ──────────────────────────────────────────────────────

namespace {

const char* failure_name(ImproveFailure f) {
  switch (f) {
    case ImproveFailure::DepthExceeded: return "depth-exceeded";
    case ImproveFailure::NoEligiblePath: return "no-eligible-path";
    case ImproveFailure::SplitUnavailable: return "split-unavailable";
    case ImproveFailure::DegenerateSeparation: return "degenerate-separation";
    case ImproveFailure::MinorFound: return "minor-witness";
  }
  return "unknown";
}

}  // namespace

std::string emit_decomposition(const DecomposeOutcome& out, const RunConfig& cfg,
                               const Graph& g) {
  ordered_json j;
  j["schema"] = "sparsetd-result-1";
  j["config"] = ordered_json::parse(emit_config(cfg));
  if (!out.ok()) {
    j["status"] = "run-failure";
    j["failure"]["stage"] = out.failure->stage;
    j["failure"]["cause"] = failure_name(out.failure->cause);
    return j.dump(2) + "\n";
  }
  const auto& res = *out.result;
  j["status"] = "ok";
  j["retained"] = res.retained;
  ordered_json tree;
  tree["parents"] = res.td.parent;
  ordered_json bags = ordered_json::array();
  for (const auto& b : res.td.bags) bags.push_back(b);
  tree["bags"] = bags;
  ordered_json diff = ordered_json::array();
  for (const auto& b : res.td.difficult) diff.push_back(b);
  tree["difficult"] = diff;
  j["tree"] = tree;
  ordered_json stats;
  int max_bag = 0;
  for (const auto& b : res.td.bags)
    max_bag = std::max(max_bag, static_cast<int>(b.size()));
  stats["max_bag"] = max_bag;
  stats["nodes"] = res.td.num_nodes();
  stats["retained_count"] = res.retained.size();
  stats["dropped_count"] = g.num_vertices() - static_cast<int>(res.retained.size());
  stats["max_depth"] = res.max_depth;
  stats["lambda_r"] = res.lambda_r;
  stats["lambda_c"] = res.lambda_c;
  stats["rich_calls"] = res.rich_calls;
  stats["pattern_actions"] = res.pattern_actions;
  j["stats"] = stats;
  return j.dump(2) + "\n";
}

ParsedDecomposition parse_decomposition(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (!j.contains("schema") || j["schema"] != "sparsetd-result-1")
    throw std::invalid_argument("result file: unknown schema");
  ParsedDecomposition out;
  if (j.at("status") != "ok") return out;
  out.ok = true;
  out.result.retained = vertex_set_from(j.at("retained"));
  for (const auto& p : j.at("tree").at("parents"))
    out.result.td.parent.push_back(p.get<int>());
  for (const auto& b : j.at("tree").at("bags"))
    out.result.td.bags.push_back(vertex_set_from(b));
  for (const auto& b : j.at("tree").at("difficult"))
    out.result.td.difficult.push_back(vertex_set_from(b));
  return out;
}

std::string emit_success_report(const SuccessReport& rep, const RunConfig& cfg) {
  ordered_json j;
  j["schema"] = "sparsetd-success-report-1";
  j["config"] = ordered_json::parse(emit_config(cfg));
  j["seed"] = rep.seed;
  j["trials"] = rep.trials;
  j["successes"] = rep.successes;
  j["run_failures"] = rep.run_failures;
  j["coverage_misses"] = rep.coverage_misses;
  j["sparsity_misses"] = rep.sparsity_misses;
  j["sparsity_threshold"] = rep.thresholds.sparsity;
  j["success_rate"] =
      rep.trials > 0 ? double(rep.successes) / double(rep.trials) : 0.0;
  j["successful_trials"] = rep.successful_trials;
  j["per_trial_max_intersection"] = rep.per_trial_max_intersection;
  return j.dump(2) + "\n";
}

}  // namespace sparsetd
