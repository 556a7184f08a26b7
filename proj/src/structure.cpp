#include "sparsetd/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "sparsetd/planar.hpp"

namespace sparsetd {

BFSLayering bfs_layering(const Graph& g, int root) {
  if (root < 0 || root >= g.num_vertices())
    throw std::invalid_argument("bfs_layering: root out of range");
  if (!g.connected()) throw std::invalid_argument("bfs_layering: disconnected");
  BFSLayering l;
  l.root = root;
  l.layer.assign(g.num_vertices(), -1);
  l.parent.assign(g.num_vertices(), -1);
  std::queue<int> q;
  l.layer[root] = 0;
  q.push(root);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : g.neighbors(v)) {
      if (l.layer[w] < 0) {
        l.layer[w] = l.layer[v] + 1;
        l.parent[w] = v;
        l.max_layer = std::max(l.max_layer, l.layer[w]);
        q.push(w);
      }
    }
  }
  return l;
}

namespace {

StructuredDecomposition single_bag_fallback(const Graph& g) {
  StructuredDecomposition sd;
  sd.degenerate = true;
  sd.host = g;
  VertexSet all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  sd.td.parent = {-1};
  sd.td.bags = {all};
  // Spanning forest: BFS forest over all components.
  std::vector<Edge> forest;
  std::vector<char> seen(g.num_vertices(), 0);
  for (int s = 0; s < g.num_vertices(); ++s) {
    if (seen[s]) continue;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          forest.emplace_back(v, w);
          q.push(w);
        }
    }
  }
  sd.forests = {forest};
  return sd;
}

std::vector<int> root_path(const BFSLayering& l, int v) {
  std::vector<int> path;
  for (int x = v; x >= 0; x = l.parent[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());  // root first
  return path;
}

}  // namespace

StructuredDecomposition three_path_decomposition(const Graph& g, int root) {
  if (g.num_vertices() < 3) return single_bag_fallback(g);
  Graph tg = triangulate(g);  // validates embedding and connectivity
  BFSLayering layering = bfs_layering(tg, root);

  // Faces of the triangulation and the dual tree over non-tree edges.
  auto faces = face_walks(tg);
  const int nf = static_cast<int>(faces.size());
  std::map<std::pair<int, int>, int> face_of_arc;
  for (int f = 0; f < nf; ++f) {
    const auto& w = faces[f];
    const int len = static_cast<int>(w.size());
    for (int i = 0; i < len; ++i)
      face_of_arc[{w[i], w[(i + 1) % len]}] = f;
  }
  std::vector<char> is_tree_edge_flag;  // keyed by edge index below
  auto edges = tg.edge_list();
  std::vector<std::vector<int>> dual_adj(nf);
  for (auto [u, v] : edges) {
    bool tree = (layering.parent[u] == v) || (layering.parent[v] == u);
    if (tree) continue;
    int f1 = face_of_arc.at({u, v});
    int f2 = face_of_arc.at({v, u});
    dual_adj[f1].push_back(f2);
    dual_adj[f2].push_back(f1);
  }

  // Root the dual tree at face 0.
  std::vector<int> parent(nf, -2);
  {
    std::queue<int> q;
    q.push(0);
    parent[0] = -1;
    int reached = 0;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      ++reached;
      for (int t : dual_adj[f])
        if (parent[t] == -2) {
          parent[t] = f;
          q.push(t);
        }
    }
    if (reached != nf)
      throw std::logic_error("three_path_decomposition: dual not connected");
  }

  StructuredDecomposition sd;
  sd.host = tg;
  sd.root_vertex = root;
  sd.root_ecc = layering.max_layer;
  sd.td.parent = parent;
  sd.td.bags.resize(nf);
  sd.forests.resize(nf);
  for (int f = 0; f < nf; ++f) {
    VertexSet corners = normalized(faces[f]);
    VertexSet bag;
    std::vector<std::vector<int>> paths;
    for (int c : corners) paths.push_back(root_path(layering, c));
    for (const auto& p : paths)
      for (int v : p) bag.push_back(v);
    sd.td.bags[f] = normalized(bag);

    // Disjointified forest: the first path whole, later paths only the
    // suffix after their shared prefix with earlier paths.
    std::vector<char> used(tg.num_vertices(), 0);
    std::vector<Edge>& forest = sd.forests[f];
    for (const auto& p : paths) {
      std::size_t start = 0;
      while (start < p.size() && used[p[start]]) ++start;
      // p[0..start-1] is a shared prefix; keep edges from `start` on.
      for (std::size_t i = start; i < p.size(); ++i) {
        used[p[i]] = 1;
        if (i > start) forest.emplace_back(p[i - 1], p[i]);
      }
    }
  }
  return sd;
}

// ── Balanced nodes ───────────────────────────────────────────────

namespace {

struct TdIndex {
  std::vector<std::vector<int>> children;
  std::vector<int> order;  // preorder
  std::vector<int> tin, tout;
  std::vector<int> depth;
  int root = 0;

  explicit TdIndex(const TreeDecomposition& td) {
    const int n = td.num_nodes();
    children = td.children();
    tin.assign(n, 0);
    tout.assign(n, 0);
    depth.assign(n, 0);
    root = td.root();
    // Iterative DFS for tin/tout.
    int timer = 0;
    std::vector<std::pair<int, int>> stack{{root, 0}};
    while (!stack.empty()) {
      auto& [v, ci] = stack.back();
      if (ci == 0) {
        tin[v] = timer++;
        order.push_back(v);
      }
      if (ci < static_cast<int>(children[v].size())) {
        int c = children[v][ci++];
        depth[c] = depth[v] + 1;
        stack.emplace_back(c, 0);
      } else {
        tout[v] = timer;
        stack.pop_back();
      }
    }
  }

  bool in_subtree(int node, int candidate_descendant) const {
    return tin[node] <= tin[candidate_descendant] &&
           tin[candidate_descendant] < tout[node];
  }
};

/// Topmost node whose bag contains v (unique by the connectivity axiom).
std::vector<int> topmost_holder(const TreeDecomposition& td, const TdIndex& idx,
                                int n) {
  std::vector<int> top(n, -1);
  for (int t : idx.order)
    for (int v : td.bags[t])
      if (top[v] < 0) top[v] = t;
  return top;
}

/// Weight of the union of bags on the child side / parent side of every
/// tree edge (child identifies the edge).
struct EdgeWeights {
  std::vector<double> down, up;
};

EdgeWeights side_weights(const TreeDecomposition& td, const TdIndex& idx,
                         const std::vector<double>& mu,
                         const std::vector<int>& top) {
  const int nodes = td.num_nodes();
  EdgeWeights w;
  w.down.assign(nodes, 0.0);
  w.up.assign(nodes, 0.0);
  double total_top = 0;
  std::vector<double> sub(nodes, 0.0);  // sum of mu over {v : top(v) in subtree}
  for (int v = 0; v < static_cast<int>(mu.size()); ++v) {
    if (top[v] >= 0 && mu[v] != 0) {
      sub[top[v]] += mu[v];
      total_top += mu[v];
    }
  }
  for (int i = static_cast<int>(idx.order.size()) - 1; i >= 0; --i) {
    int t = idx.order[i];
    for (int c : idx.children[t]) sub[t] += sub[c];
  }
  for (int s : idx.order) {
    if (td.parent[s] < 0) continue;
    int t = td.parent[s];
    double down = sub[s], up = total_top - sub[s];
    for (int v : td.bags[s])
      if (top[v] >= 0 && !idx.in_subtree(s, top[v])) down += mu[v];
    for (int v : td.bags[t])
      if (top[v] >= 0 && idx.in_subtree(s, top[v])) up += mu[v];
    w.down[s] = down;
    w.up[s] = up;
  }
  return w;
}

VertexSet bags_union_of_side(const TreeDecomposition& td, const TdIndex& idx,
                             int t, int side_root) {
  // Union of bags over the component of T - {t} that contains side_root.
  // side_root is either a child of t (its subtree) or the parent of t
  // (everything outside t's subtree).
  VertexSet out;
  if (td.parent[side_root] == t) {
    for (int s : idx.order)
      if (idx.in_subtree(side_root, s))
        for (int v : td.bags[s]) out.push_back(v);
  } else {
    for (int s : idx.order)
      if (!idx.in_subtree(t, s))
        for (int v : td.bags[s]) out.push_back(v);
  }
  return normalized(out);
}

CandidateSeparation build_candidate(const StructuredDecomposition& sd,
                                    const TdIndex& idx, int t,
                                    const std::vector<int>& side_roots,
                                    unsigned side_mask) {
  // side_mask bit i set: component i goes to the A side.
  CandidateSeparation cand;
  cand.node = t;
  cand.forest = sd.forests[t];
  VertexSet a = sd.td.bags[t];
  VertexSet b = sd.td.bags[t];
  for (std::size_t i = 0; i < side_roots.size(); ++i) {
    VertexSet side = bags_union_of_side(sd.td, idx, t, side_roots[i]);
    if (side_mask & (1u << i))
      a = set_union(a, side);
    else
      b = set_union(b, side);
  }
  cand.sep.a = a;
  cand.sep.b = b;
  cand.degenerate = set_difference(a, b).empty() || set_difference(b, a).empty();
  return cand;
}

}  // namespace

CandidateSeparation balanced_node_for_weight(const StructuredDecomposition& sd,
                                             const Graph& g,
                                             const std::vector<double>& mu) {
  double total = 0;
  for (double x : mu) total += x;
  if (total <= 0) throw std::invalid_argument("balanced_node: zero total weight");

  TdIndex idx(sd.td);
  auto top = topmost_holder(sd.td, idx, g.num_vertices());
  auto w = side_weights(sd.td, idx, mu, top);

  // Orient each edge toward the heavier side (ties point at the
  // parent); a node with no outgoing edge splits every component to
  // at most half of the weight.
  int t = idx.root;
  {
    // A node is a sink if every incident edge points at it.
    std::vector<char> has_out(sd.td.num_nodes(), 0);
    for (int s = 0; s < sd.td.num_nodes(); ++s) {
      if (sd.td.parent[s] < 0) continue;
      if (w.down[s] <= w.up[s])
        has_out[s] = 1;  // edge points to parent
      else
        has_out[sd.td.parent[s]] = 1;  // edge points to child
    }
    for (int v = 0; v < sd.td.num_nodes(); ++v)
      if (!has_out[v]) {
        t = v;
        break;
      }
  }

  // Components of T - {t} with their weights outside the bag.
  std::vector<int> side_roots;
  for (int c : idx.children[t]) side_roots.push_back(c);
  if (sd.td.parent[t] >= 0) side_roots.push_back(sd.td.parent[t]);

  std::vector<char> in_bag(g.num_vertices(), 0);
  for (int v : sd.td.bags[t]) in_bag[v] = 1;
  std::vector<double> item(side_roots.size(), 0.0);
  std::vector<VertexSet> side_sets(side_roots.size());
  for (std::size_t i = 0; i < side_roots.size(); ++i) {
    side_sets[i] = bags_union_of_side(sd.td, idx, t, side_roots[i]);
    for (int v : side_sets[i])
      if (!in_bag[v]) item[i] += mu[v];
  }

  // Heaviest component alone versus the rest keeps both sides within
  // (2/3) of the total (components are at most 3 with the heaviest at
  // most half, so the remainder is at most 2/3 of the total).
  unsigned mask = 0;
  if (!side_roots.empty()) {
    std::size_t heaviest = 0;
    for (std::size_t i = 1; i < side_roots.size(); ++i)
      if (item[i] > item[heaviest]) heaviest = i;
    mask = 1u << heaviest;
  }

  CandidateSeparation cand;
  cand.node = t;
  cand.forest = sd.forests[t];
  VertexSet a = sd.td.bags[t];
  VertexSet b = sd.td.bags[t];
  for (std::size_t i = 0; i < side_roots.size(); ++i) {
    if (mask & (1u << i))
      a = set_union(a, side_sets[i]);
    else
      b = set_union(b, side_sets[i]);
  }
  cand.sep.a = a;
  cand.sep.b = b;
  cand.degenerate = set_difference(a, b).empty() || set_difference(b, a).empty();
  if (cand.degenerate) {
    // Trivial split: the callers treat it as a leaf.
    cand.sep.a = VertexSet(g.num_vertices());
    std::iota(cand.sep.a.begin(), cand.sep.a.end(), 0);
    cand.sep.b = sd.td.bags[t];
  }
  return cand;
}

std::vector<CandidateSeparation> candidate_separations(
    const StructuredDecomposition& sd, const Graph& g, const VertexSet& u) {
  if (u.empty()) throw std::invalid_argument("candidate_separations: empty U");
  TdIndex idx(sd.td);
  auto top = topmost_holder(sd.td, idx, g.num_vertices());

  VertexSet y_nodes;
  std::vector<int> tops;
  for (int v : u) {
    if (top[v] < 0)
      throw std::invalid_argument("candidate_separations: U vertex in no bag");
    tops.push_back(top[v]);
  }
  tops = normalized(tops);
  auto lca = [&](int a, int b) {
    while (a != b) {
      if (idx.depth[a] < idx.depth[b]) std::swap(a, b);
      a = sd.td.parent[a];
    }
    return a;
  };
  for (std::size_t i = 0; i < tops.size(); ++i)
    for (std::size_t j = i; j < tops.size(); ++j)
      y_nodes.push_back(lca(tops[i], tops[j]));
  y_nodes = normalized(y_nodes);

  std::vector<CandidateSeparation> family;
  for (int t : y_nodes) {
    std::vector<int> side_roots;
    for (int c : idx.children[t]) side_roots.push_back(c);
    if (sd.td.parent[t] >= 0) side_roots.push_back(sd.td.parent[t]);
    if (side_roots.empty()) {
      family.push_back(build_candidate(sd, idx, t, side_roots, 0));
      continue;
    }
    // All bipartitions with component 0 fixed on the A side.
    unsigned half = 1u << (side_roots.size() - 1);
    for (unsigned rest = 0; rest < half; ++rest)
      family.push_back(
          build_candidate(sd, idx, t, side_roots, (rest << 1) | 1u));
  }
  return family;
}

// ── Clusters ─────────────────────────────────────────────────────

ClusterFamily disjoint_clusters(const Graph& g, const ClusterFamily& zs) {
  const int d = zs.diameter_bound;
  for (const auto& k : zs.clusters)
    if (!is_d_cluster(g, k, d))
      throw std::invalid_argument("disjoint_clusters: invalid input cluster");

  VertexSet u;
  for (const auto& k : zs.clusters) u = set_union(u, normalized(k));

  std::vector<char> outside(g.num_vertices(), 1);
  for (int v : u) outside[v] = 0;

  // Greedy maximal set of centers pairwise more than d apart in G[U].
  VertexSet centers;
  for (int v : u) {
    auto dist = bfs_distances(g, {v}, &outside);
    bool ok = true;
    for (int c : centers)
      if (dist[c] >= 0 && dist[c] <= d) {
        ok = false;
        break;
      }
    if (ok) centers.push_back(v);
  }

  // Voronoi cells, ties to the lowest center id.
  std::vector<std::vector<int>> dist_from(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i)
    dist_from[i] = bfs_distances(g, {centers[i]}, &outside);

  ClusterFamily out;
  out.diameter_bound = 2 * d;
  out.clusters.assign(centers.size(), {});
  for (int v : u) {
    int best = -1;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (dist_from[i][v] < 0) continue;
      if (best < 0 || dist_from[i][v] < dist_from[best][v]) best = static_cast<int>(i);
    }
    if (best < 0)
      throw std::logic_error("disjoint_clusters: vertex not covered by centers");
    out.clusters[best].push_back(v);
  }
  for (auto& k : out.clusters) k = normalized(k);
  out.clusters.erase(std::remove_if(out.clusters.begin(), out.clusters.end(),
                                    [](const VertexSet& k) { return k.empty(); }),
                     out.clusters.end());
  return out;
}

}  // namespace sparsetd
