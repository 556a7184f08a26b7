#include "sparsetd/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "sparsetd/planar.hpp"
#include "sparsetd/structure.hpp"

namespace sparsetd {

namespace {

int graph_diameter(const Graph& g) {
  int diam = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto dist = bfs_distances(g, {v});
    for (int x : dist) diam = std::max(diam, x);
  }
  return diam;
}

int log2_ceil_of(int k) {
  int lg = 0;
  while ((1 << lg) < k) ++lg;
  return std::max(lg, 1);
}

int lambda_core(const DecomposeConfig& cfg, int diameter) {
  return static_cast<int>(3.0 * (diameter + 1) +
                          cfg.cdp * cfg.k * log2_ceil_of(std::max(cfg.k, 2)));
}

struct RunFailSignal {
  RunFailure info;
};

struct Piece {
  VertexSet retained;
  TreeDecomposition td;
  int max_depth = 0;
};

Piece join_under_root(const VertexSet& root_bag, const VertexSet& root_diff,
                      std::vector<Piece> children) {
  Piece out;
  out.td.parent.push_back(-1);
  out.td.bags.push_back(root_bag);
  out.td.difficult.push_back(root_diff);
  for (auto& child : children) {
    int offset = out.td.num_nodes();
    for (int i = 0; i < child.td.num_nodes(); ++i) {
      int p = child.td.parent[i];
      out.td.parent.push_back(p < 0 ? 0 : p + offset);
      out.td.bags.push_back(std::move(child.td.bags[i]));
      out.td.difficult.push_back(child.td.difficult.empty()
                                     ? VertexSet{}
                                     : std::move(child.td.difficult[i]));
    }
    out.retained = set_union(out.retained, child.retained);
    out.max_depth = std::max(out.max_depth, child.max_depth);
  }
  return out;
}

struct Recursion {
  const Graph& g;
  const DecomposeConfig& cfg;
  const StructuredDecomposition& sd;
  ImproveConfig icfg;
  int depth_cap;
  int rich_calls = 0;
  int pattern_actions = 0;
  int leaf_calls = 0;

  Piece run(VertexSet m, VertexSet r, VertexSet rt, VertexSet rold, int depth,
            SplitRng rng) {
    if (depth > depth_cap)
      throw std::logic_error("decompose: depth cap exceeded");

    // Leaf rule.
    {
      long free_size = static_cast<long>(set_difference(m, r).size());
      if (free_size * free_size <= 16L * cfg.k) {
        ++leaf_calls;
        Piece leaf;
        leaf.retained = m;
        leaf.td.parent = {-1};
        leaf.td.bags = {m};
        leaf.td.difficult = {set_union(rt, set_difference(m, r))};
        leaf.max_depth = depth;
        return leaf;
      }
    }

    const int mode = depth % 5;
    Separation ab;
    VertexSet c, ct;

    if (mode <= 3) {
      VertexSet w;
      switch (mode) {
        case 0: w = set_difference(m, r); break;
        case 1: w = r; break;
        case 2: w = rt; break;
        default:
          if (rold.size() <= 3) rold = r;
          w = rold;
          break;
      }
      if (w.empty())
        return run(std::move(m), std::move(r), std::move(rt), std::move(rold),
                   depth + 1, rng.split(3));

      std::vector<double> mu(g.num_vertices(), 0.0);
      for (int v : w) mu[v] = 1.0;
      CandidateSeparation cand = balanced_node_for_weight(sd, g, mu);
      if (cand.degenerate) {
        ++leaf_calls;
        Piece leaf;
        leaf.retained = m;
        leaf.td.parent = {-1};
        leaf.td.bags = {m};
        leaf.td.difficult = {set_union(rt, set_difference(m, r))};
        leaf.max_depth = depth;
        return leaf;
      }
      int theta = static_cast<int>(w.size() / 4);
      bool rich = rng.chance(1, cfg.k);
      if (rich) {
        ++rich_calls;
        SplitRng sub = rng.split(4);
        ImproveResult res =
            improve_sample(sd.host, cfg.k, r, cand, icfg, sub, &w, theta);
        if (!res.ok()) {
          RunFailSignal sig;
          sig.info.stage = "improve(regular)";
          sig.info.cause = res.failure;
          sig.info.witness = res.witness;
          throw sig;
        }
        ab = res.tuple->sep;
        c = res.tuple->c;
        ct = res.tuple->c_tilde;
      } else {
        ab = cand.sep;
        c = set_intersection(normalized(cand.sep.a), normalized(cand.sep.b));
        ct = {};
      }
    } else {
      // Pattern mode.
      bool act = rng.chance(1, cfg.k);
      if (!act || r.empty())
        return run(std::move(m), std::move(r), std::move(rt), std::move(rold),
                   depth + 1, rng.split(3));
      ++pattern_actions;
      auto family = candidate_separations(sd, g, r);
      CandidateSeparation cand = family[rng.uniform(static_cast<int>(family.size()))];
      if (cand.degenerate)
        return run(std::move(m), std::move(r), std::move(rt), std::move(rold),
                   depth + 1, rng.split(3));
      SplitRng sub = rng.split(4);
      ImproveResult res = improve_sample(sd.host, cfg.k, r, cand, icfg, sub);
      if (!res.ok()) {
        RunFailSignal sig;
        sig.info.stage = "improve(pattern)";
        sig.info.cause = res.failure;
        sig.info.witness = res.witness;
        throw sig;
      }
      ab = res.tuple->sep;
      c = res.tuple->c;
      ct = res.tuple->c_tilde;
    }

    VertexSet a = normalized(ab.a), b = normalized(ab.b);
    VertexSet cut = set_intersection(a, b);
    VertexSet cbar = set_difference(cut, set_union(c, r));

    SplitRng rng_a = rng.split(1);
    SplitRng rng_b = rng.split(2);
    std::vector<Piece> children;
    for (int side = 0; side < 2; ++side) {
      const VertexSet& gamma = side == 0 ? a : b;
      VertexSet mg = set_difference(set_intersection(m, gamma), cbar);
      VertexSet rg = set_union(set_intersection(r, gamma), set_intersection(c, m));
      VertexSet gamma_minus_c = set_difference(gamma, c);
      VertexSet rtg = set_union(set_intersection(rt, gamma_minus_c),
                                set_intersection(ct, m));
      VertexSet roldg = set_intersection(rold, gamma_minus_c);
      children.push_back(run(std::move(mg), std::move(rg), std::move(rtg),
                             std::move(roldg), depth + 1,
                             side == 0 ? rng_a : rng_b));
    }

    VertexSet root_bag = set_union(r, set_intersection(c, m));
    VertexSet root_diff = set_union(rt, set_intersection(ct, m));
    return join_under_root(root_bag, root_diff, std::move(children));
  }
};

Piece fallback_three_path(const Graph& g, const VertexSet& y0, int root) {
  StructuredDecomposition sd = three_path_decomposition(g, root);
  Piece out;
  out.retained.resize(g.num_vertices());
  std::iota(out.retained.begin(), out.retained.end(), 0);
  out.td = sd.td;
  out.td.difficult.assign(out.td.num_nodes(), {});
  if (!y0.empty())
    for (auto& bag : out.td.bags) bag = set_union(bag, y0);
  return out;
}

}  // namespace

int lambda_r_bound(const DecomposeConfig& cfg, int diameter) {
  return 100 * lambda_core(cfg, diameter);
}

int lambda_c_bound(const DecomposeConfig& cfg, int diameter) {
  return 2 * lambda_core(cfg, diameter);
}

DecomposeOutcome decompose_bounded_diameter(const Graph& g,
                                            const DecomposeConfig& cfg,
                                            const VertexSet& y0, SplitRng rng) {
  if (!g.connected())
    throw std::invalid_argument("decompose_bounded_diameter: disconnected input");
  if (cfg.k < 2) throw std::invalid_argument("decompose: k must be at least 2");
  for (int v : y0)
    if (v < 0 || v >= g.num_vertices())
      throw std::invalid_argument("decompose: Y0 out of range");

  DecomposeOutcome out;
  const int diam = graph_diameter(g);

  if (cfg.k < cfg.kappa || g.num_vertices() < 3) {
    Piece p = fallback_three_path(g, normalized(y0), 0);
    DecompositionResult res;
    res.retained = std::move(p.retained);
    res.td = std::move(p.td);
    res.lambda_r = lambda_r_bound(cfg, diam);
    res.lambda_c = lambda_c_bound(cfg, diam);
    out.result = std::move(res);
    return out;
  }

  StructuredDecomposition sd = three_path_decomposition(g, 0);
  Recursion rec{g, cfg, sd, cfg.improve_config(),
                /*depth_cap=*/0};
  rec.depth_cap =
      static_cast<int>(std::ceil(5.0 * std::log(std::max(g.num_vertices(), 2)) /
                                 std::log(7.0 / 6.0))) +
      10;

  VertexSet y = normalized(y0);
  VertexSet all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  try {
    Piece p = rec.run(all, y, y, y, 0, rng);
    DecompositionResult res;
    res.retained = std::move(p.retained);
    res.td = std::move(p.td);
    res.max_depth = p.max_depth;
    res.lambda_r = lambda_r_bound(cfg, diam);
    res.lambda_c = lambda_c_bound(cfg, diam);
    res.rich_calls = rec.rich_calls;
    res.pattern_actions = rec.pattern_actions;
    res.leaf_calls = rec.leaf_calls;
    out.result = std::move(res);
  } catch (const RunFailSignal& sig) {
    out.failure = sig.info;
  }
  return out;
}

DecomposeOutcome baker_decompose(const Graph& g, const DecomposeConfig& cfg,
                                 SplitRng rng) {
  if (!g.has_rotation())
    throw std::invalid_argument("baker_decompose: embedding required");
  if (cfg.k < 2) throw std::invalid_argument("baker_decompose: k must be >= 2");

  const int n = g.num_vertices();
  auto comps = g.components();

  // One pendant per component; BFS layers from the pendants.
  Graph gp = g;
  std::vector<int> pendants;
  for (const auto& comp : comps) {
    pendants.push_back(gp.num_vertices());
    gp = add_pendant_vertex(gp, comp[0]);
  }
  auto layer = bfs_distances(gp, pendants);

  const int kprime = cfg.d == 0 ? cfg.k : (cfg.d + 1) * cfg.k;
  const int a = rng.uniform(kprime + 1);

  DecomposeOutcome out;
  std::vector<Piece> slabs;
  int slab_counter = 0;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    std::vector<char> in_comp(gp.num_vertices(), 0);
    for (int v : comps[ci]) in_comp[v] = 1;
    in_comp[pendants[ci]] = 1;
    int comp_max_layer = 0;
    for (int v : comps[ci]) comp_max_layer = std::max(comp_max_layer, layer[v]);

    for (int i = 0;; ++i) {
      const int hi = a - 1 + (kprime + 1) * i;
      const int inner_hi = a + (kprime + 1) * (i - 1);
      if (inner_hi >= comp_max_layer) break;
      // Non-apex layers of this slab: inner_hi+1 .. hi.
      bool nonempty = false;
      std::vector<char> keep(gp.num_vertices(), 0);
      for (int v = 0; v < gp.num_vertices(); ++v) {
        if (!in_comp[v] || layer[v] > hi) continue;
        keep[v] = 1;
        if (layer[v] > inner_hi) nonempty = true;
      }
      if (!nonempty) continue;

      auto sub = induce(gp, keep);
      // Contract everything at or below the inner boundary to the apex.
      VertexSet inner;
      for (int v = 0; v < gp.num_vertices(); ++v)
        if (keep[v] && layer[v] <= inner_hi) inner.push_back(sub.to_sub[v]);
      if (i == 0) inner = {sub.to_sub[pendants[ci]]};

      Graph slab;
      int apex;
      std::vector<int> slab_to_g(0);
      if (inner.size() == 1) {
        slab = sub.graph;
        apex = inner[0];
        slab_to_g.assign(slab.num_vertices(), -1);
        for (int v = 0; v < slab.num_vertices(); ++v) {
          int orig = sub.to_full[v];
          slab_to_g[v] = orig < n ? orig : -1;  // pendant maps nowhere
        }
        slab_to_g[apex] = -1;
      } else {
        Contraction con = contract_set_embedded(sub.graph, normalized(inner));
        slab = con.graph;
        apex = con.merged_vertex;
        slab_to_g.assign(slab.num_vertices(), -1);
        for (int v = 0; v < sub.graph.num_vertices(); ++v) {
          int mapped = con.remap[v];
          if (mapped == apex) continue;
          int orig = sub.to_full[v];
          slab_to_g[mapped] = orig < n ? orig : -1;
        }
      }

      SplitRng slab_rng = rng.split(100 + slab_counter);
      ++slab_counter;
      bool plentiful = slab_rng.chance(1, cfg.k);
      Piece piece;
      if (plentiful && slab.num_vertices() >= 3) {
        DecomposeOutcome sub_out =
            decompose_bounded_diameter(slab, cfg, {}, slab_rng.split(1));
        if (!sub_out.ok()) {
          out.failure = sub_out.failure;
          out.failure->stage = "slab " + std::to_string(slab_counter - 1) + ": " +
                               out.failure->stage;
          return out;
        }
        piece.retained = sub_out.result->retained;
        piece.td = std::move(sub_out.result->td);
        piece.max_depth = sub_out.result->max_depth;
      } else {
        Piece fp = fallback_three_path(slab, {}, apex);
        piece = std::move(fp);
      }

      // Strip the apex and translate to input ids.
      auto translate = [&](VertexSet& vs) {
        VertexSet outv;
        for (int v : vs)
          if (slab_to_g[v] >= 0) outv.push_back(slab_to_g[v]);
        vs = normalized(outv);
      };
      translate(piece.retained);
      for (auto& bag : piece.td.bags) translate(bag);
      if (piece.td.difficult.empty())
        piece.td.difficult.assign(piece.td.num_nodes(), {});
      for (auto& diff : piece.td.difficult) translate(diff);
      slabs.push_back(std::move(piece));
    }
  }

  Piece whole = join_under_root({}, {}, std::move(slabs));
  DecompositionResult res;
  res.retained = std::move(whole.retained);
  res.td = std::move(whole.td);
  res.max_depth = whole.max_depth;
  res.lambda_r = lambda_r_bound(cfg, 2 * kprime + 2);
  res.lambda_c = lambda_c_bound(cfg, 2 * kprime + 2);
  out.result = std::move(res);
  return out;
}

// ── Gluing ───────────────────────────────────────────────────────

GlueResult glue(const Graph& g, const TreeDecomposition& outer,
                const std::vector<GluePiece>& pieces) {
  (void)g;  // pieces are induced by vertex set; the graph fixes the contract
  const int nodes = outer.num_nodes();
  if (static_cast<int>(pieces.size()) != nodes)
    throw std::invalid_argument("glue: one piece per outer node required");
  for (int t = 0; t < nodes; ++t)
    if (!is_subset(pieces[t].vertices, outer.bags[t]))
      throw std::invalid_argument("glue: piece is not inside its torso");

  // Process parents before children.
  std::vector<int> order;
  {
    auto ch = outer.children();
    std::queue<int> q;
    q.push(outer.root());
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      order.push_back(t);
      for (int c : ch[t]) q.push(c);
    }
  }

  std::vector<VertexSet> adhesion(nodes);
  for (int t = 0; t < nodes; ++t)
    if (outer.parent[t] >= 0)
      adhesion[t] = set_intersection(outer.bags[t], outer.bags[outer.parent[t]]);

  std::vector<VertexSet> kept(nodes);        // V(G'_t)
  std::vector<TreeDecomposition> tds(nodes);  // modified (T_t, beta_t)
  for (int t : order) {
    VertexSet inherit;
    if (outer.parent[t] >= 0)
      inherit = set_intersection(adhesion[t], kept[outer.parent[t]]);
    kept[t] = set_union(set_difference(pieces[t].vertices, adhesion[t]), inherit);
    tds[t] = pieces[t].td;
    if (outer.parent[t] >= 0) {
      for (auto& bag : tds[t].bags)
        bag = set_union(set_difference(bag, adhesion[t]), inherit);
      if (tds[t].difficult.empty())
        tds[t].difficult.assign(tds[t].num_nodes(), {});
      for (auto& diff : tds[t].difficult)
        diff = set_difference(diff, adhesion[t]);
    } else if (tds[t].difficult.empty()) {
      tds[t].difficult.assign(tds[t].num_nodes(), {});
    }
  }

  // Assemble the joined tree.
  GlueResult res;
  std::vector<int> offset(nodes, 0);
  for (int t : order) {
    offset[t] = res.td.num_nodes();
    for (int i = 0; i < tds[t].num_nodes(); ++i) {
      res.td.parent.push_back(-2);  // fixed below
      res.td.bags.push_back(tds[t].bags[i]);
      res.td.difficult.push_back(tds[t].difficult[i]);
    }
    for (int i = 0; i < tds[t].num_nodes(); ++i) {
      int p = tds[t].parent[i];
      res.td.parent[offset[t] + i] = p < 0 ? -2 : offset[t] + p;
    }
  }
  for (int t : order) {
    int local_root = offset[t] + tds[t].root();
    if (outer.parent[t] < 0) {
      res.td.parent[local_root] = -1;
      continue;
    }
    VertexSet need = set_intersection(adhesion[t], kept[outer.parent[t]]);
    int host = -1;
    int pt = outer.parent[t];
    for (int i = 0; i < tds[pt].num_nodes() && host < 0; ++i)
      if (is_subset(need, tds[pt].bags[i])) host = offset[pt] + i;
    if (host < 0) throw std::invalid_argument("glue: adhesion not coverable");
    res.td.parent[local_root] = host;
  }

  for (int t = 0; t < nodes; ++t)
    res.retained =
        set_union(res.retained, set_difference(pieces[t].vertices, adhesion[t]));
  return res;
}

}  // namespace sparsetd
