#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsetd/decompose.hpp"
#include "sparsetd/distance.hpp"
#include "sparsetd/flow.hpp"
#include "sparsetd/improve.hpp"
#include "sparsetd/io.hpp"
#include "sparsetd/oracle.hpp"
#include "sparsetd/planar.hpp"
#include "sparsetd/structure.hpp"

using namespace sparsetd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitRunFailure = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

int sparsity_bound(const RunConfig& cfg, int diameter) {
  if (cfg.sparsity_threshold > 0) return cfg.sparsity_threshold;
  double k = cfg.decompose.k;
  double lg = std::log2(std::max(2.0, k));
  return static_cast<int>(std::ceil(
      cfg.sparse_mult * (std::sqrt(k) * lg + (diameter + 1) / std::sqrt(k))));
}

int run_generate(const std::string& kind, int a, int b, std::uint64_t seed,
                 const std::string& out_path) {
  GraphFile gf;
  if (kind == "grid")
    gf = generate_grid(a, b);
  else if (kind == "cylinder")
    gf = generate_cylinder(a, b);
  else if (kind == "path")
    gf = generate_path(a);
  else if (kind == "random-maximal-planar")
    gf = generate_random_maximal_planar(a, seed);
  else
    throw std::invalid_argument("unknown generator kind: " + kind);
  write_out(out_path, emit_graph(gf));
  return kExitOk;
}

int run_decompose(const RunConfig& cfg, const std::string& in_path,
                  const std::string& out_path) {
  GraphFile gf = parse_graph(slurp(in_path));
  if (!gf.graph.has_rotation())
    throw std::invalid_argument("decompose requires a rotation system");
  DecomposeOutcome out = baker_decompose(gf.graph, cfg.decompose, SplitRng(cfg.seed));
  write_out(out_path, emit_decomposition(out, cfg, gf.graph));
  return out.ok() ? kExitOk : kExitRunFailure;
}

int run_duality(const RunConfig& cfg, const std::string& mode, int s, int t,
                int p, int q, const std::string& in_path,
                const std::string& out_path) {
  GraphFile gf = parse_graph(slurp(in_path));
  const Graph& g = gf.graph;
  VertexSet z0 = gf.sets.count("Z0") ? gf.sets["Z0"] : VertexSet{};
  VertexSet x = gf.sets.count("X") ? gf.sets["X"] : VertexSet{};
  nlohmann::ordered_json j;
  j["schema"] = "sparsetd-duality-1";
  j["mode"] = mode;
  if (mode == "pq") {
    PQStructure pq = pq_structure(g, s, t, q);
    j["p"] = pq.p;
    j["q"] = pq.q;
    j["separators"] = pq.separators;
    j["paths"] = pq.paths;
    auto ver = verify_pq_structure(g, s, t, pq);
    j["verified"] = ver.valid;
  } else if (mode == "dual1") {
    Dual1Outcome oc = dual1_outcome(g, s, t, z0, p, q, cfg.decompose.k);
    j["outcome"] = oc.is_chain ? "chain" : "paths";
    if (oc.is_chain) {
      j["chain"] = oc.chain;
    } else {
      j["paths"] = oc.paths;
      j["qsets"] = oc.qsets;
    }
  } else if (mode == "dualdist") {
    DistanceDualParams params;
    params.p = p;
    params.q = q;
    params.r = p;
    params.d = std::max(1, cfg.decompose.d);
    params.h = cfg.decompose.h;
    {
      std::vector<char> keep(g.num_vertices(), 0);
      for (int v : x) keep[v] = 1;
      auto comps = induce(g, keep).graph.components().size();
      params.lambda = static_cast<int>(std::max<std::size_t>(1, comps));
    }
    params.k = cfg.decompose.k;
    params.k0 = static_cast<int>(z0.size());
    DistanceDualOutcome oc = dual_distance(g, s, t, x, z0, params);
    j["outcome"] = oc.is_chain ? "chain" : "paths";
    j["p0"] = oc.p0;
    if (oc.is_chain) {
      j["chain"] = oc.chain.separators;
      j["weights"] = oc.chain.weights;
    } else {
      j["paths"] = oc.paths.paths;
      j["qsets"] = oc.paths.qsets;
    }
  } else {
    throw std::invalid_argument("unknown duality mode: " + mode);
  }
  write_out(out_path, j.dump(2) + "\n");
  return kExitOk;
}

int run_improve(const RunConfig& cfg, bool enumerate, const std::string& in_path,
                const std::string& out_path) {
  GraphFile gf = parse_graph(slurp(in_path));
  const Graph& g = gf.graph;
  if (!g.has_rotation())
    throw std::invalid_argument("improve requires a rotation system");
  VertexSet z0 = gf.sets.count("Z0") ? gf.sets["Z0"] : VertexSet{};
  StructuredDecomposition sd = three_path_decomposition(g, 0);
  std::vector<double> mu(g.num_vertices(), 1.0);
  CandidateSeparation cand = balanced_node_for_weight(sd, g, mu);
  if (cand.degenerate)
    throw std::invalid_argument("improve: graph too small for a separation");
  ImproveConfig icfg = cfg.decompose.improve_config();
  nlohmann::ordered_json j;
  j["schema"] = "sparsetd-improve-1";
  if (enumerate) {
    ImproveFamily fam = improve_enumerate(g, cfg.decompose.k, z0, cand, icfg);
    j["family_size"] = fam.tuples.size();
    j["leaves"] = fam.leaves;
    j["budget_exceeded"] = fam.budget_exceeded;
    nlohmann::ordered_json tuples = nlohmann::ordered_json::array();
    for (const auto& t : fam.tuples) {
      nlohmann::ordered_json tj;
      tj["a"] = t.sep.a;
      tj["b"] = t.sep.b;
      tj["c"] = t.c;
      tj["c_tilde"] = t.c_tilde;
      tuples.push_back(tj);
    }
    j["tuples"] = tuples;
    write_out(out_path, j.dump(2) + "\n");
    return kExitOk;
  }
  SplitRng rng(cfg.seed);
  ImproveResult res = improve_sample(g, cfg.decompose.k, z0, cand, icfg, rng);
  if (!res.ok()) {
    j["status"] = "run-failure";
    write_out(out_path, j.dump(2) + "\n");
    return kExitRunFailure;
  }
  j["status"] = "ok";
  j["a"] = res.tuple->sep.a;
  j["b"] = res.tuple->sep.b;
  j["c"] = res.tuple->c;
  j["c_tilde"] = res.tuple->c_tilde;
  write_out(out_path, j.dump(2) + "\n");
  return kExitOk;
}

int run_verify(const std::string& graph_path, const std::string& result_path) {
  GraphFile gf = parse_graph(slurp(graph_path));
  ParsedDecomposition parsed = parse_decomposition(slurp(result_path));
  if (!parsed.ok) {
    std::cerr << "verify: result file records a run failure\n";
    return kExitInputError;
  }
  const auto& res = parsed.result;
  // The decomposition must cover exactly the retained set.
  VertexSet in_bags;
  for (const auto& b : res.td.bags) in_bags = set_union(in_bags, b);
  if (in_bags != res.retained) {
    std::cerr << "verify: bags do not cover the retained set exactly\n";
    return kExitInputError;
  }
  auto rep = validate_tree_decomposition(gf.graph, res.td);
  if (!rep.valid) {
    std::cerr << "verify: " << rep.violated_condition << "\n";
    return kExitInputError;
  }
  // Oracle cross-checks on small graphs.
  if (gf.graph.num_vertices() <= 12) {
    int tw = exact_treewidth(gf.graph);
    if (tw > rep.max_bag_size - 1) {
      std::cerr << "verify: bag size below the exact treewidth\n";
      return kExitInputError;
    }
  }
  if (gf.graph.has_rotation() && gf.graph.num_vertices() <= 12) {
    if (find_minor_model(gf.graph, {MinorSpec::Kind::Clique, 5}) ||
        find_minor_model(gf.graph, {MinorSpec::Kind::Biclique3, 3})) {
      std::cerr << "verify: embedded graph contains a forbidden minor\n";
      return kExitInputError;
    }
  }
  std::cout << "verify: ok (max bag " << rep.max_bag_size << ")\n";
  return kExitOk;
}

int run_bench(const RunConfig& cfg, const std::string& in_path,
              const std::string& out_path) {
  GraphFile gf = parse_graph(slurp(in_path));
  PlantedPattern pattern;
  pattern.d = cfg.decompose.d;
  if (pattern.d == 0) {
    if (!gf.sets.count("Z"))
      throw std::invalid_argument("bench: graph file must name a set Z");
    pattern.z = gf.sets["Z"];
  } else {
    ClusterFamily fam;
    fam.diameter_bound = pattern.d;
    for (const auto& [name, s] : gf.sets)
      if (name.rfind("cluster", 0) == 0) fam.clusters.push_back(s);
    if (fam.clusters.empty())
      throw std::invalid_argument("bench: graph file must name cluster* sets");
    auto disj = disjoint_clusters(gf.graph, fam);
    pattern.clusters = disj.clusters;  // 2d-clusters; d stays the radius
  }
  int diam = 2 * (cfg.decompose.d == 0 ? cfg.decompose.k
                                       : (cfg.decompose.d + 1) * cfg.decompose.k);
  McThresholds th{sparsity_bound(cfg, diam)};
  SuccessReport rep = monte_carlo_success(gf.graph, cfg.decompose, pattern,
                                          cfg.trials, th, cfg.seed, cfg.parallel);
  write_out(out_path, emit_success_report(rep, cfg));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pattern-sparse tree decompositions of planar graphs"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path, input, output;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config JSON file");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--k", cfg.decompose.k, "pattern size budget");
    cmd->add_option("--d", cfg.decompose.d, "neighborhood radius");
    cmd->add_option("--trials", cfg.trials, "Monte-Carlo trials");
    cmd->add_option("-o,--out", output, "output file (default stdout)");
    std::string fmt = "json";
    cmd->add_option("--format", fmt, "output format (json)");
  };

  auto* gen = app.add_subcommand("generate", "emit a generated graph file");
  std::string gen_kind;
  int gen_a = 4, gen_b = 4;
  gen->add_option("kind", gen_kind,
                  "grid | cylinder | path | random-maximal-planar")
      ->required();
  gen->add_option("--rows", gen_a, "rows (or n for path/random)");
  gen->add_option("--cols", gen_b, "columns");
  gen->add_option("--n", gen_a, "vertex count for path/random");
  add_common(gen);

  auto* dec = app.add_subcommand("decompose", "run the randomized decomposer");
  dec->add_option("input", input, "graph JSON file")->required();
  add_common(dec);

  auto* dua = app.add_subcommand("duality", "flow/cut duality structures");
  std::string dua_mode = "pq";
  int dua_s = 0, dua_t = 1, dua_p = 1, dua_q = 2;
  dua->add_option("input", input, "graph JSON file")->required();
  dua->add_option("--mode", dua_mode, "pq | dual1 | dualdist");
  dua->add_option("--s", dua_s, "source vertex");
  dua->add_option("--t", dua_t, "target vertex");
  dua->add_option("--p", dua_p, "separator budget");
  dua->add_option("--q", dua_q, "path budget");
  add_common(dua);

  auto* imp = app.add_subcommand("improve", "separator improvement");
  bool imp_enum = false;
  imp->add_option("input", input, "graph JSON file")->required();
  imp->add_flag("--enumerate", imp_enum, "enumerate the whole family");
  add_common(imp);

  auto* ver = app.add_subcommand("verify", "validate a decomposition result");
  std::string ver_result;
  ver->add_option("input", input, "graph JSON file")->required();
  ver->add_option("result", ver_result, "result JSON file")->required();

  auto* ben = app.add_subcommand("bench", "Monte-Carlo success-rate estimation");
  ben->add_option("input", input, "graph JSON file")->required();
  ben->add_option("--sparsity", cfg.sparsity_threshold,
                  "override the sparsity threshold");
  bool ben_parallel = false;
  ben->add_flag("--parallel", ben_parallel, "fan trials out with OpenMP");
  add_common(ben);

  std::uint64_t gen_seed = 1;
  gen->add_option("--gen-seed", gen_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      RunConfig file_cfg = parse_config(slurp(config_path));
      // Command-line flags win over the file.
      std::swap(cfg, file_cfg);
      for (auto* cmd : {gen, dec, dua, imp, ben}) {
        if (cmd->count("--seed")) cfg.seed = file_cfg.seed;
        if (cmd->count("--k")) cfg.decompose.k = file_cfg.decompose.k;
        if (cmd->count("--d")) cfg.decompose.d = file_cfg.decompose.d;
        if (cmd->count("--trials")) cfg.trials = file_cfg.trials;
      }
      if (ben->count("--sparsity"))
        cfg.sparsity_threshold = file_cfg.sparsity_threshold;
    }
    cfg.parallel = cfg.parallel || ben_parallel;

    if (gen->parsed()) return run_generate(gen_kind, gen_a, gen_b, gen_seed, output);
    if (dec->parsed()) return run_decompose(cfg, input, output);
    if (dua->parsed())
      return run_duality(cfg, dua_mode, dua_s, dua_t, dua_p, dua_q, input, output);
    if (imp->parsed()) return run_improve(cfg, imp_enum, input, output);
    if (ver->parsed()) return run_verify(input, ver_result);
    if (ben->parsed()) return run_bench(cfg, input, output);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailure;
  }
  return kExitOk;
}
