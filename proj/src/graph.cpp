#include "sparsetd/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace sparsetd {

Graph Graph::from_edges(int n, const std::vector<Edge>& edges) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  Graph g;
  g.n_ = n;
  g.adj_.assign(n, {});
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("loop edge");
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  int m = 0;
  for (auto& a : g.adj_) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw std::invalid_argument("parallel edge");
    m += static_cast<int>(a.size());
  }
  g.m_ = m / 2;
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<Edge> Graph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (int u = 0; u < n_; ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

void Graph::set_rotation(Rotation rot) {
  if (static_cast<int>(rot.size()) != n_)
    throw std::invalid_argument("rotation size mismatch");
  for (int v = 0; v < n_; ++v) {
    auto sorted = rot[v];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != adj_[v])
      throw std::invalid_argument("rotation does not list the neighbors");
  }
  rotation_ = std::move(rot);
}

bool Graph::connected() const {
  if (n_ == 0) return true;
  return static_cast<int>(components().size()) == 1;
}

std::vector<VertexSet> Graph::components() const {
  std::vector<VertexSet> comps;
  std::vector<char> seen(n_, 0);
  for (int s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    VertexSet comp;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      comp.push_back(v);
      for (int w : adj_[v])
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

// ── Separations ──────────────────────────────────────────────────

SeparationReport validate_separation(const Graph& g, const Separation& s) {
  const int n = g.num_vertices();
  for (int v : s.a)
    if (v < 0 || v >= n) throw std::invalid_argument("A vertex out of range");
  for (int v : s.b)
    if (v < 0 || v >= n) throw std::invalid_argument("B vertex out of range");

  std::vector<char> in_a(n, 0), in_b(n, 0);
  for (int v : s.a) in_a[v] = 1;
  for (int v : s.b) in_b[v] = 1;

  SeparationReport rep;
  for (int v = 0; v < n; ++v) {
    if (!in_a[v] && !in_b[v]) {
      rep.violation = "cover: vertex " + std::to_string(v) + " in neither side";
      return rep;
    }
  }
  bool a_strict = false, b_strict = false;
  for (int v = 0; v < n; ++v) {
    a_strict = a_strict || (in_a[v] && !in_b[v]);
    b_strict = b_strict || (in_b[v] && !in_a[v]);
  }
  if (!a_strict) {
    rep.violation = "A minus B is empty";
    return rep;
  }
  if (!b_strict) {
    rep.violation = "B minus A is empty";
    return rep;
  }
  for (int u = 0; u < n; ++u) {
    if (!(in_a[u] && !in_b[u])) continue;
    for (int v : g.neighbors(u)) {
      if (in_b[v] && !in_a[v]) {
        rep.violation = "crossing edge";
        rep.witness_edge = Edge{u, v};
        return rep;
      }
    }
  }
  rep.valid = true;
  return rep;
}

// ── Tree decompositions ──────────────────────────────────────────

int TreeDecomposition::root() const {
  for (int i = 0; i < num_nodes(); ++i)
    if (parent[i] < 0) return i;
  return -1;
}

std::vector<std::vector<int>> TreeDecomposition::children() const {
  std::vector<std::vector<int>> ch(num_nodes());
  for (int i = 0; i < num_nodes(); ++i)
    if (parent[i] >= 0) ch[parent[i]].push_back(i);
  return ch;
}

TdReport validate_tree_decomposition(const Graph& g, const TreeDecomposition& td) {
  TdReport rep;
  const int nodes = td.num_nodes();
  if (nodes == 0 || static_cast<int>(td.bags.size()) != nodes) {
    rep.violated_condition = "malformed tree";
    return rep;
  }
  // Parent array must describe a single rooted tree.
  int roots = 0;
  for (int i = 0; i < nodes; ++i) {
    if (td.parent[i] < 0) {
      ++roots;
    } else if (td.parent[i] >= nodes) {
      rep.violated_condition = "parent out of range";
      return rep;
    }
  }
  if (roots != 1) {
    rep.violated_condition = "tree must have exactly one root";
    return rep;
  }
  {
    // Every node must reach the root (no parent cycles).
    std::vector<int> depth(nodes, -1);
    for (int i = 0; i < nodes; ++i) {
      int v = i, steps = 0;
      while (v >= 0 && depth[v] < 0 && steps <= nodes) {
        v = td.parent[v];
        ++steps;
      }
      if (steps > nodes) {
        rep.violated_condition = "parent cycle";
        return rep;
      }
      depth[i] = 0;
    }
  }

  const int n = g.num_vertices();
  for (int t = 0; t < nodes; ++t) {
    for (int v : td.bags[t]) {
      if (v < 0 || v >= n) throw std::invalid_argument("bag vertex out of range");
    }
    rep.max_bag_size =
        std::max(rep.max_bag_size, static_cast<int>(td.bags[t].size()));
  }
  if (!td.difficult.empty()) {
    if (static_cast<int>(td.difficult.size()) != nodes) {
      rep.violated_condition = "difficult map size mismatch";
      return rep;
    }
    for (int t = 0; t < nodes; ++t) {
      if (!is_subset(td.difficult[t], td.bags[t])) {
        rep.violated_condition = "difficult set not inside its bag";
        return rep;
      }
    }
  }

  std::vector<char> in_union(n, 0);
  for (const auto& bag : td.bags)
    for (int v : bag) in_union[v] = 1;

  // Connectivity: the nodes holding v must form one subtree.
  auto ch = td.children();
  std::vector<std::vector<int>> holding(n);
  for (int t = 0; t < nodes; ++t)
    for (int v : td.bags[t]) holding[v].push_back(t);
  for (int v = 0; v < n; ++v) {
    if (!in_union[v]) continue;
    std::vector<char> mark(nodes, 0);
    for (int t : holding[v]) mark[t] = 1;
    // BFS inside the marked subforest from the first holder.
    std::vector<char> seen(nodes, 0);
    std::queue<int> q;
    q.push(holding[v][0]);
    seen[holding[v][0]] = 1;
    int reached = 0;
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      ++reached;
      auto step = [&](int u) {
        if (u >= 0 && mark[u] && !seen[u]) {
          seen[u] = 1;
          q.push(u);
        }
      };
      step(td.parent[t]);
      for (int c : ch[t]) step(c);
    }
    if (reached != static_cast<int>(holding[v].size())) {
      rep.violated_condition =
          "vertex " + std::to_string(v) + " not connected in the tree";
      return rep;
    }
  }

  // Edge coverage, restricted to the union of bags.
  for (int u = 0; u < n; ++u) {
    if (!in_union[u]) continue;
    for (int v : g.neighbors(u)) {
      if (v < u || !in_union[v]) continue;
      bool covered = false;
      for (int t : holding[u]) {
        if (set_contains(td.bags[t], v)) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        rep.violated_condition = "edge {" + std::to_string(u) + "," +
                                 std::to_string(v) + "} not covered";
        return rep;
      }
    }
  }

  rep.valid = true;
  return rep;
}

BagPatternStats bag_pattern_stats(const TreeDecomposition& td, const Graph& g,
                                  const VertexSet& z, int d) {
  BagPatternStats stats;
  VertexSet ball = neighborhood(g, z, d);
  std::vector<char> in_ball(g.num_vertices(), 0);
  for (int v : ball) in_ball[v] = 1;
  std::vector<char> in_union(g.num_vertices(), 0);
  for (const auto& bag : td.bags) {
    int count = 0;
    for (int v : bag) {
      if (in_ball[v]) ++count;
      in_union[v] = 1;
    }
    stats.max_bag_intersection = std::max(stats.max_bag_intersection, count);
  }
  stats.pattern_covered = true;
  for (int v : z)
    if (!in_union[v]) stats.pattern_covered = false;
  return stats;
}

// ── Neighborhoods ────────────────────────────────────────────────

std::vector<int> bfs_distances(const Graph& g, const VertexSet& sources,
                               const std::vector<char>* deleted) {
  std::vector<int> dist(g.num_vertices(), -1);
  std::queue<int> q;
  for (int s : sources) {
    if (deleted && (*deleted)[s]) continue;
    if (dist[s] == 0) continue;
    dist[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : g.neighbors(v)) {
      if (deleted && (*deleted)[w]) continue;
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

VertexSet neighborhood(const Graph& g, const VertexSet& s, int d) {
  for (int v : s)
    if (v < 0 || v >= g.num_vertices())
      throw std::invalid_argument("neighborhood: vertex out of range");
  if (d == 0) return normalized(s);
  auto dist = bfs_distances(g, s);
  VertexSet out;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (dist[v] >= 0 && dist[v] <= d) out.push_back(v);
  return out;
}

// ── Contraction ──────────────────────────────────────────────────

Contraction contract_set(const Graph& g, const VertexSet& s) {
  if (s.empty()) throw std::invalid_argument("contract_set: empty set");
  const int n = g.num_vertices();
  std::vector<char> in_s(n, 0);
  for (int v : s) {
    if (v < 0 || v >= n) throw std::invalid_argument("contract_set: out of range");
    in_s[v] = 1;
  }
  // Connectivity of G[S].
  {
    std::queue<int> q;
    std::vector<char> seen(n, 0);
    q.push(s[0]);
    seen[s[0]] = 1;
    int reached = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      ++reached;
      for (int w : g.neighbors(v))
        if (in_s[w] && !seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
    }
    if (reached != static_cast<int>(normalized(s).size()))
      throw std::invalid_argument("contract_set: set not connected");
  }

  Contraction res;
  res.remap.assign(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (!in_s[v]) res.remap[v] = next++;
  res.merged_vertex = next;
  for (int v = 0; v < n; ++v)
    if (in_s[v]) res.remap[v] = res.merged_vertex;

  std::vector<Edge> edges;
  for (auto [u, v] : g.edge_list()) {
    int nu = res.remap[u], nv = res.remap[v];
    if (nu == nv) continue;
    edges.emplace_back(std::min(nu, nv), std::max(nu, nv));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  res.graph = Graph::from_edges(next + 1, edges);
  return res;
}

// ── Clusters ─────────────────────────────────────────────────────

bool is_d_cluster(const Graph& g, const VertexSet& k, int d) {
  if (k.empty()) return false;
  std::vector<char> outside(g.num_vertices(), 1);
  for (int v : k) outside[v] = 0;
  for (int v : k) {
    auto dist = bfs_distances(g, {v}, &outside);
    for (int u : k)
      if (dist[u] < 0 || dist[u] > d) return false;
  }
  return true;
}

// ── Set helpers ──────────────────────────────────────────────────

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool set_contains(const VertexSet& a, int v) {
  return std::binary_search(a.begin(), a.end(), v);
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

VertexSet normalized(VertexSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace sparsetd
