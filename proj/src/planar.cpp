#include "sparsetd/planar.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace sparsetd {

namespace {

// Face traversal over a raw rotation table. Returns faces as lists of
// directed edges (u,v).
std::vector<std::vector<std::pair<int, int>>> trace_faces(
    int n, const std::vector<std::vector<int>>& rot) {
  // Position of u inside rot[v], for O(1) successor lookup.
  std::vector<std::map<int, int>> pos(n);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < static_cast<int>(rot[v].size()); ++i)
      pos[v][rot[v][i]] = i;

  std::vector<std::vector<std::pair<int, int>>> faces;
  std::map<std::pair<int, int>, char> used;
  for (int u = 0; u < n; ++u) {
    for (int v : rot[u]) {
      if (used.count({u, v})) continue;
      std::vector<std::pair<int, int>> face;
      int a = u, b = v;
      do {
        used[{a, b}] = 1;
        face.emplace_back(a, b);
        int idx = pos[b].at(a);
        int next = rot[b][(idx + 1) % rot[b].size()];
        a = b;
        b = next;
      } while (!(a == u && b == v));
      faces.push_back(std::move(face));
    }
  }
  return faces;
}

}  // namespace

EmbeddingReport validate_embedding(const Graph& g) {
  EmbeddingReport rep;
  if (!g.has_rotation()) {
    rep.violation = "no rotation system";
    return rep;
  }
  auto faces = trace_faces(g.num_vertices(), g.rotation());
  // Assign each face to the component of its first vertex.
  auto comps = g.components();
  std::vector<int> comp_of(g.num_vertices(), -1);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    for (int v : comps[c]) comp_of[v] = c;
  std::vector<int> face_count(comps.size(), 0);
  for (const auto& f : faces) ++face_count[comp_of[f.front().first]];
  std::vector<int> edge_count(comps.size(), 0);
  for (auto [u, v] : g.edge_list()) ++edge_count[comp_of[u]];

  for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
    int vcount = static_cast<int>(comps[c].size());
    int fcount = edge_count[c] == 0 ? 1 : face_count[c];
    if (vcount - edge_count[c] + fcount != 2) {
      rep.violation = "Euler check failed on component " + std::to_string(c);
      return rep;
    }
  }
  rep.valid = true;
  return rep;
}

std::vector<std::vector<int>> face_walks(const Graph& g) {
  if (!g.has_rotation()) throw std::invalid_argument("face_walks: no rotation");
  auto faces = trace_faces(g.num_vertices(), g.rotation());
  std::vector<std::vector<int>> walks;
  walks.reserve(faces.size());
  for (const auto& f : faces) {
    std::vector<int> w;
    w.reserve(f.size());
    for (auto [u, v] : f) w.push_back(u);
    walks.push_back(std::move(w));
  }
  return walks;
}

Graph triangulate(const Graph& g) {
  auto emb = validate_embedding(g);
  if (!emb.valid) throw std::invalid_argument("triangulate: " + emb.violation);
  if (!g.connected()) throw std::invalid_argument("triangulate: disconnected");
  const int n = g.num_vertices();
  if (n < 3) throw std::invalid_argument("triangulate: fewer than 3 vertices");

  std::vector<std::vector<int>> rot = g.rotation();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [u, v] : g.edge_list()) adj[u][v] = adj[v][u] = 1;

  auto insert_after = [&](int at, int prev, int value) {
    auto& r = rot[at];
    auto it = std::find(r.begin(), r.end(), prev);
    r.insert(it + 1, value);
  };

  for (;;) {
    auto faces = trace_faces(n, rot);
    bool changed = false;
    for (const auto& face : faces) {
      const int len = static_cast<int>(face.size());
      if (len <= 3) continue;
      std::vector<int> walk;
      walk.reserve(len);
      for (auto [u, v] : face) walk.push_back(u);
      // A chord between two non-adjacent distinct vertices of the walk.
      int ci = -1, cj = -1;
      for (int gap = 2; gap <= len - 2 && ci < 0; ++gap) {
        for (int i = 0; i < len; ++i) {
          int j = (i + gap) % len;
          int x = walk[i], y = walk[j];
          if (x != y && !adj[x][y]) {
            ci = i;
            cj = j;
            break;
          }
        }
      }
      if (ci < 0)
        throw std::logic_error("triangulate: face admits no chord");
      int x = walk[ci], y = walk[cj];
      int prev_i = walk[(ci - 1 + len) % len];
      int prev_j = walk[(cj - 1 + len) % len];
      insert_after(x, prev_i, y);
      insert_after(y, prev_j, x);
      adj[x][y] = adj[y][x] = 1;
      changed = true;
      break;  // rotations changed; re-trace faces
    }
    if (!changed) break;
  }

  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (adj[u][v]) edges.emplace_back(u, v);
  Graph out = Graph::from_edges(n, edges);
  out.set_rotation(std::move(rot));
  return out;
}

// ── Embedding-preserving contraction ─────────────────────────────

namespace {

/// Arc-level planar map: arcs 2e and 2e+1 are twins; rotations are
/// circular doubly-linked lists of out-arcs per vertex.
struct ArcMap {
  std::vector<int> head;  // per arc
  std::vector<int> nxt, prv;
  std::vector<int> first;  // an out-arc per vertex, or -1
  std::vector<char> dead_arc;
  std::vector<char> dead_vertex;

  int tail(int a) const { return head[a ^ 1]; }

  static ArcMap build(const Graph& g) {
    ArcMap m;
    auto edges = g.edge_list();
    const int n = g.num_vertices();
    std::map<std::pair<int, int>, int> arc_id;  // (u,v) -> arc
    m.head.resize(2 * edges.size());
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      auto [u, v] = edges[e];
      m.head[2 * e] = v;
      m.head[2 * e + 1] = u;
      arc_id[{u, v}] = 2 * e;
      arc_id[{v, u}] = 2 * e + 1;
    }
    m.nxt.assign(2 * edges.size(), -1);
    m.prv.assign(2 * edges.size(), -1);
    m.first.assign(n, -1);
    m.dead_arc.assign(2 * edges.size(), 0);
    m.dead_vertex.assign(n, 0);
    const auto& rot = g.rotation();
    for (int v = 0; v < n; ++v) {
      if (rot[v].empty()) continue;
      std::vector<int> arcs;
      arcs.reserve(rot[v].size());
      for (int w : rot[v]) arcs.push_back(arc_id.at({v, w}));
      for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
        int j = (i + 1) % arcs.size();
        m.nxt[arcs[i]] = arcs[j];
        m.prv[arcs[j]] = arcs[i];
      }
      m.first[v] = arcs[0];
    }
    return m;
  }

  void unlink(int a) {
    int u = tail(a);
    if (nxt[a] == a) {
      first[u] = -1;
    } else {
      nxt[prv[a]] = nxt[a];
      prv[nxt[a]] = prv[a];
      if (first[u] == a) first[u] = nxt[a];
    }
    dead_arc[a] = 1;
  }

  std::vector<int> ring(int v) const {
    std::vector<int> out;
    if (first[v] < 0) return out;
    int a = first[v];
    do {
      out.push_back(a);
      a = nxt[a];
    } while (a != first[v]);
    return out;
  }

  /// Contracts arc a = (u,v), merging v into u.
  void contract_arc(int a) {
    const int u = tail(a), v = head[a];
    const int b = a ^ 1;
    // Retarget arcs whose head is v.
    for (int o : ring(v)) head[o ^ 1] = u;
    // Splice v's rotation (minus b) into u's (replacing a).
    int p = prv[a], q = nxt[a];
    int r = prv[b], s = nxt[b];
    bool u_only_a = (nxt[a] == a);
    bool v_only_b = (nxt[b] == b);
    if (v_only_b && u_only_a) {
      first[u] = -1;
    } else if (v_only_b) {
      nxt[p] = q;
      prv[q] = p;
      if (first[u] == a) first[u] = q;
    } else if (u_only_a) {
      nxt[r] = s;
      prv[s] = r;
      first[u] = s;
    } else {
      nxt[p] = s;
      prv[s] = p;
      nxt[r] = q;
      prv[q] = r;
      if (first[u] == a) first[u] = q;
    }
    dead_arc[a] = dead_arc[b] = 1;
    dead_vertex[v] = 1;
    first[v] = -1;
    // Loops at u (from parallel u-v edges) disappear.
    for (;;) {
      int loop = -1;
      for (int o : ring(u))
        if (head[o] == u) {
          loop = o;
          break;
        }
      if (loop < 0) break;
      unlink(loop);
      unlink(loop ^ 1);
    }
  }

  /// Removes later duplicates among v's incident edges.
  void simplify_at(int v) {
    for (;;) {
      std::vector<int> seen;
      int dup = -1;
      for (int o : ring(v)) {
        int w = head[o];
        if (std::find(seen.begin(), seen.end(), w) != seen.end()) {
          dup = o;
          break;
        }
        seen.push_back(w);
      }
      if (dup < 0) break;
      unlink(dup);
      unlink(dup ^ 1);
    }
  }
};

}  // namespace

Contraction contract_set_embedded(const Graph& g, const VertexSet& s) {
  if (!g.has_rotation())
    throw std::invalid_argument("contract_set_embedded: no rotation");
  if (s.empty()) throw std::invalid_argument("contract_set_embedded: empty set");
  const int n = g.num_vertices();
  VertexSet sn = normalized(s);
  std::vector<char> in_s(n, 0);
  for (int v : sn) in_s[v] = 1;

  // BFS tree of G[S], arcs recorded in discovery order.
  ArcMap m = ArcMap::build(g);
  std::vector<int> tree_arcs;
  {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(sn[0]);
    seen[sn[0]] = 1;
    int reached = 1;
    // Arc lookup by scanning rings (sizes are small).
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int o : m.ring(v)) {
        int w = m.head[o];
        if (in_s[w] && !seen[w]) {
          seen[w] = 1;
          ++reached;
          tree_arcs.push_back(o);
          q.push(w);
        }
      }
    }
    if (reached != static_cast<int>(sn.size()))
      throw std::invalid_argument("contract_set_embedded: set not connected");
  }

  for (int a : tree_arcs) m.contract_arc(a);
  const int merged_old = sn[0];
  m.simplify_at(merged_old);

  Contraction res;
  res.remap.assign(n, -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (!in_s[v]) res.remap[v] = next++;
  res.merged_vertex = next;
  for (int v = 0; v < n; ++v)
    if (in_s[v]) res.remap[v] = res.merged_vertex;

  std::vector<Edge> edges;
  Rotation rot(next + 1);
  for (int v = 0; v < n; ++v) {
    if (m.dead_vertex[v] || (in_s[v] && v != merged_old)) continue;
    int nv = res.remap[v];
    for (int o : m.ring(v)) {
      int w = res.remap[m.head[o]];
      rot[nv].push_back(w);
      if (nv < w) edges.emplace_back(nv, w);
    }
  }
  res.graph = Graph::from_edges(next + 1, edges);
  res.graph.set_rotation(std::move(rot));
  return res;
}

Graph add_pendant_vertex(const Graph& g, int attach) {
  if (attach < 0 || attach >= g.num_vertices())
    throw std::invalid_argument("add_pendant_vertex: out of range");
  const int n = g.num_vertices();
  auto edges = g.edge_list();
  edges.emplace_back(attach, n);
  Graph out = Graph::from_edges(n + 1, edges);
  if (g.has_rotation()) {
    Rotation rot = g.rotation();
    rot.resize(n + 1);
    rot[attach].push_back(n);
    rot[n].push_back(attach);
    out.set_rotation(std::move(rot));
  }
  return out;
}

InducedSubgraph induce(const Graph& g, const std::vector<char>& keep) {
  InducedSubgraph res;
  const int n = g.num_vertices();
  res.to_sub.assign(n, -1);
  for (int v = 0; v < n; ++v)
    if (keep[v]) {
      res.to_sub[v] = static_cast<int>(res.to_full.size());
      res.to_full.push_back(v);
    }
  std::vector<Edge> edges;
  for (auto [u, v] : g.edge_list())
    if (keep[u] && keep[v]) edges.emplace_back(res.to_sub[u], res.to_sub[v]);
  res.graph = Graph::from_edges(static_cast<int>(res.to_full.size()), edges);
  if (g.has_rotation()) {
    Rotation rot(res.to_full.size());
    for (int v = 0; v < n; ++v) {
      if (!keep[v]) continue;
      for (int w : g.rotation()[v])
        if (keep[w]) rot[res.to_sub[v]].push_back(res.to_sub[w]);
    }
    res.graph.set_rotation(std::move(rot));
  }
  return res;
}

}  // namespace sparsetd
