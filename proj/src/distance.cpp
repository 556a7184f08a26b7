#include "sparsetd/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "sparsetd/planar.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sparsetd {

namespace {

constexpr long kInf = std::numeric_limits<long>::max() / 4;

// Dinic maximum flow, used only for vertex cuts.
class Dinic {
 public:
  explicit Dinic(int n) : head_(n), level_(n), it_(n) {}

  void add_arc(int from, int to, long cap) {
    head_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    head_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0});
  }

  long run(int s, int t) {
    long flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      long f;
      while ((f = dfs(s, t, kInf)) > 0) flow += f;
    }
    return flow;
  }

  /// Residual reachability from s after run().
  std::vector<char> reachable(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a : head_[v])
        if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          q.push(arcs_[a].to);
        }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    long cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a : head_[v])
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[v] + 1;
          q.push(arcs_[a].to);
        }
    }
    return level_[t] >= 0;
  }

  long dfs(int v, int t, long limit) {
    if (v == t) return limit;
    for (int& i = it_[v]; i < static_cast<int>(head_[v].size()); ++i) {
      int a = head_[v][i];
      if (arcs_[a].cap <= 0 || level_[arcs_[a].to] != level_[v] + 1) continue;
      long got = dfs(arcs_[a].to, t, std::min(limit, arcs_[a].cap));
      if (got > 0) {
        arcs_[a].cap -= got;
        arcs_[a ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_, it_;
};

}  // namespace

std::pair<VertexSet, long> min_weight_vertex_cut(const Graph& g, int s, int t,
                                                 const std::vector<long>& weight,
                                                 const std::vector<char>* deleted) {
  const int n = g.num_vertices();
  Dinic dinic(2 * n);
  auto vin = [](int v) { return 2 * v; };
  auto vout = [](int v) { return 2 * v + 1; };
  for (int v = 0; v < n; ++v) {
    if (deleted && (*deleted)[v]) continue;
    long cap = (v == s || v == t) ? kInf : weight[v];
    dinic.add_arc(vin(v), vout(v), cap);
  }
  for (auto [u, v] : g.edge_list()) {
    if (deleted && ((*deleted)[u] || (*deleted)[v])) continue;
    dinic.add_arc(vout(u), vin(v), kInf);
    dinic.add_arc(vout(v), vin(u), kInf);
  }
  long value = dinic.run(vout(s), vin(t));
  auto reach = dinic.reachable(vout(s));
  VertexSet cut;
  long wsum = 0;
  for (int v = 0; v < n; ++v) {
    if (deleted && (*deleted)[v]) continue;
    if (v == s || v == t) continue;
    if (reach[vin(v)] && !reach[vout(v)]) {
      cut.push_back(v);
      wsum += weight[v];
    }
  }
  if (wsum != value)
    throw std::logic_error("min_weight_vertex_cut: cut/flow mismatch");
  return {cut, value};
}

// ── Shortcut paths ───────────────────────────────────────────────

ShortcutPaths shortcut_paths(const Graph& g, int s, int t, const VertexSet& x,
                             const VertexSet& z0, const PQStructure& pq,
                             const DistanceDualParams& params) {
  const int n = g.num_vertices();
  const int d = params.d;
  const int r = params.r;
  if (d < 1) throw std::invalid_argument("shortcut_paths: d must be >= 1");
  if (r < pq.p) throw std::invalid_argument("shortcut_paths: r < p");

  std::vector<char> in_x(n, 0);
  for (int v : x) in_x[v] = 1;
  if (in_x[s] || in_x[t])
    throw std::invalid_argument("shortcut_paths: terminal inside X");

  ShortcutPaths out;
  for (int i = 0; i < pq.q; ++i) {
    VertexSet pub = public_vertices(pq, i);
    VertexSet priv;
    for (int v : pq.paths[i])
      if (v != s && v != t && !set_contains(pub, v)) priv.push_back(v);
    priv = normalized(priv);

    // Z0-vertices close to the private part while avoiding X, the
    // public vertices, s and t.
    std::vector<char> blocked = in_x;
    for (int v : pub) blocked[v] = 1;
    blocked[s] = blocked[t] = 1;
    auto dist_priv = bfs_distances(g, priv, &blocked);
    VertexSet z0i;
    for (int z : z0)
      if (!in_x[z] && !blocked[z] && dist_priv[z] >= 0 && dist_priv[z] <= d)
        z0i.push_back(z);
    z0i = normalized(z0i);

    // The shortcut arena: private vertices plus d-balls (in G-X) of the
    // public vertices, nearby Z0, and the terminals.
    VertexSet centers = set_union(set_union(pub, z0i),
                                  VertexSet{std::min(s, t), std::max(s, t)});
    std::vector<char> keep(n, 0);
    for (int v : priv) keep[v] = 1;
    auto dist_centers = bfs_distances(g, centers, &in_x);
    for (int v = 0; v < n; ++v)
      if (!in_x[v] && dist_centers[v] >= 0 && dist_centers[v] <= d) keep[v] = 1;

    auto sub = induce(g, keep);
    auto dist_s = bfs_distances(sub.graph, {sub.to_sub[s]});
    if (dist_s[sub.to_sub[t]] < 0)
      throw std::logic_error("shortcut_paths: arena lost the s-t connection");

    // Shortest s-t path with deterministic (lowest predecessor) ties.
    std::vector<int> path_sub;
    {
      int cur = sub.to_sub[t];
      path_sub.push_back(cur);
      while (cur != sub.to_sub[s]) {
        int best = -1;
        for (int w : sub.graph.neighbors(cur))
          if (dist_s[w] == dist_s[cur] - 1 && (best < 0 || w < best)) best = w;
        cur = best;
        path_sub.push_back(cur);
      }
      std::reverse(path_sub.begin(), path_sub.end());
    }
    std::vector<int> path;
    path.reserve(path_sub.size());
    for (int v : path_sub) path.push_back(sub.to_full[v]);

    // Q_i: path vertices inside the balls around the centers; each
    // single ball may contribute at most 2d+1 of them.
    VertexSet qset;
    for (int v : path)
      if (dist_centers[v] >= 0 && dist_centers[v] <= d) qset.push_back(v);
    qset = normalized(qset);

    for (int c : centers) {
      auto dc = bfs_distances(g, {c}, &in_x);
      int cnt = 0;
      for (int v : path)
        if (dc[v] >= 0 && dc[v] <= d) ++cnt;
      if (cnt > 2 * d + 1)
        throw std::logic_error("shortcut_paths: ball bound violated");
    }

    if (static_cast<int>(qset.size()) > 10 * d * r) continue;
    out.paths.push_back(std::move(path));
    out.qsets.push_back(std::move(qset));
    out.source_index.push_back(i);
  }
  return out;
}

// ── Reweighted chain ─────────────────────────────────────────────

ReweightedChain reweighted_chain(const Graph& g, int s, int t,
                                 const VertexSet& x,
                                 const std::vector<VertexSet>& chain,
                                 const DistanceDualParams& params) {
  const int n = g.num_vertices();
  const int d = params.d;
  const int q = params.q;
  const int p = static_cast<int>(chain.size());
  if (q < 2) throw std::invalid_argument("reweighted_chain: q must be >= 2");
  if (d < 1) throw std::invalid_argument("reweighted_chain: d must be >= 1");

  std::vector<char> in_x(n, 0);
  for (int v : x) in_x[v] = 1;

  const double zc = 2.0 * std::log2(2.0 * q + 1.0) + 2.0 * d;
  const int zstep = static_cast<int>(std::ceil(zc));
  const int jmax = (p - 2 * (d + 1)) / zstep - 2;
  if (jmax < 1)
    throw std::invalid_argument("reweighted_chain: chain too short for q,d (raise p)");
  // Capped weights: anything further than this from the base separator
  // already weighs more than 2q and can never join a cut.
  const int cap_dist = static_cast<int>(std::floor(std::log2(2.0 * q)));
  const long cap_weight = 2L * q + 1;

  ReweightedChain out;
  out.separators.assign(jmax, {});
  out.weights.assign(jmax, 0);
  out.source_index.assign(jmax, 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int j = 1; j <= jmax; ++j) {
    const int iota = j * zstep + d + 1;
    const VertexSet& base = chain[iota - 1];
    auto dist = bfs_distances(g, base, &in_x);
    std::vector<long> weight(n, cap_weight);
    for (int v = 0; v < n; ++v) {
      if (in_x[v] || dist[v] < 0 || dist[v] > cap_dist) continue;
      weight[v] = 1L << dist[v];
    }
    auto [cut, value] = min_weight_vertex_cut(g, s, t, weight, &in_x);
    out.separators[j - 1] = cut;
    out.weights[j - 1] = value;
    out.source_index[j - 1] = iota;
  }

  for (int j = 0; j < jmax; ++j) {
    if (out.weights[j] > 2L * q)
      throw std::logic_error("reweighted_chain: cut heavier than the base separator");
    // Separator check.
    std::vector<char> blocked = in_x;
    for (int v : out.separators[j]) blocked[v] = 1;
    auto dist = bfs_distances(g, {s}, &blocked);
    if (dist[t] >= 0)
      throw std::logic_error("reweighted_chain: cut does not separate");
  }
  // No vertex of G-X may be within distance d of two of the new
  // separators, and s,t must be far from all of them.
  {
    std::vector<int> owner(n, -1);
    for (int j = 0; j < jmax; ++j) {
      auto dist = bfs_distances(g, out.separators[j], &in_x);
      for (int v = 0; v < n; ++v) {
        if (in_x[v] || dist[v] < 0 || dist[v] > d) continue;
        if (v == s || v == t)
          throw std::logic_error("reweighted_chain: terminal close to a cut");
        if (owner[v] >= 0)
          throw std::logic_error("reweighted_chain: cuts too close together");
        owner[v] = j;
      }
    }
  }
  return out;
}

DistanceDualOutcome dual_distance(const Graph& g, int s, int t,
                                  const VertexSet& x, const VertexSet& z0,
                                  const DistanceDualParams& params) {
  const int n = g.num_vertices();
  std::vector<char> in_x(n, 0);
  for (int v : x) {
    if (v == s || v == t)
      throw std::invalid_argument("dual_distance: terminal inside X");
    in_x[v] = 1;
  }
  {
    // Component budget of G[X].
    auto sub = induce(g, in_x);
    if (static_cast<int>(sub.graph.components().size()) > params.lambda)
      throw std::invalid_argument("dual_distance: G[X] has too many components");
  }
  {
    auto dist = bfs_distances(g, {s}, &in_x);
    if (dist[t] < 0) throw std::runtime_error("dual_distance: s,t disconnected in G-X");
  }

  // (p0,q)-structure of (G - X, s, t), mapped back to G ids.
  std::vector<char> keep(n, 1);
  for (int v : x) keep[v] = 0;
  auto sub = induce(g, keep);
  PQStructure pq = pq_structure(sub.graph, sub.to_sub[s], sub.to_sub[t], params.q);
  PQStructure pq_full = pq;
  pq_full.s = s;
  pq_full.t = t;
  for (auto& c : pq_full.separators) {
    for (int& v : c) v = sub.to_full[v];
    c = normalized(c);
  }
  for (auto& path : pq_full.paths)
    for (int& v : path) v = sub.to_full[v];
  pq_full.y0.assign(n, -1);
  pq_full.y1.assign(n, -1);
  pq_full.z.assign(n, 0);
  for (int v = 0; v < sub.graph.num_vertices(); ++v) {
    pq_full.y0[sub.to_full[v]] = pq.y0[v];
    pq_full.y1[sub.to_full[v]] = pq.y1[v];
    pq_full.z[sub.to_full[v]] = pq.z[v];
  }

  DistanceDualOutcome out;
  out.p0 = pq_full.p;
  if (pq_full.p >= params.p) {
    std::vector<VertexSet> base(pq_full.separators.begin(),
                                pq_full.separators.begin() + params.p);
    DistanceDualParams chain_params = params;
    out.is_chain = true;
    out.chain = reweighted_chain(g, s, t, x, base, chain_params);
  } else {
    DistanceDualParams path_params = params;
    path_params.r = params.p;
    out.paths = shortcut_paths(g, s, t, x, z0, pq_full, path_params);
  }
  return out;
}

}  // namespace sparsetd
