#include "sparsetd/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace sparsetd {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

struct McfArc {
  int to;
  int cap;
  int cost;
  int flow = 0;
};

/// Min-cost flow by successive shortest augmenting paths with vertex
/// potentials (costs are nonnegative, so plain Dijkstra throughout).
class MinCostFlow {
 public:
  explicit MinCostFlow(int n) : head_(n), dist_(n), pot_(n, 0), prev_arc_(n) {}

  int add_arc(int from, int to, int cap, int cost) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, cost});
    head_[from].push_back(id);
    arcs_.push_back({from, 0, -cost});
    head_[to].push_back(id + 1);
    from_.push_back(from);
    from_.push_back(to);
    return id;
  }

  /// Sends up to `value` units from s to t; returns the amount sent.
  int run(int s, int t, int value) {
    int sent = 0;
    while (sent < value) {
      if (!dijkstra(s, t)) break;
      int push = value - sent;
      for (int v = t; v != s; v = from_[prev_arc_[v]])
        push = std::min(push, arcs_[prev_arc_[v]].cap - arcs_[prev_arc_[v]].flow);
      for (int v = t; v != s; v = from_[prev_arc_[v]]) {
        arcs_[prev_arc_[v]].flow += push;
        arcs_[prev_arc_[v] ^ 1].flow -= push;
      }
      sent += push;
      for (std::size_t v = 0; v < pot_.size(); ++v)
        if (dist_[v] < kInf) pot_[v] += dist_[v];
    }
    return sent;
  }

  /// True shortest-path distances from s in the final residual network
  /// under the original costs (Bellman-Ford; backward arcs are
  /// negative but the optimal flow has no negative cycle).
  std::vector<int> residual_distances(int s) const {
    std::vector<int> d(head_.size(), kInf);
    d[s] = 0;
    const int n = static_cast<int>(head_.size());
    for (int round = 0; round < n; ++round) {
      bool relaxed = false;
      for (int a = 0; a < static_cast<int>(arcs_.size()); ++a) {
        if (arcs_[a].flow >= arcs_[a].cap) continue;  // no residual capacity
        int u = from_[a], v = arcs_[a].to;
        if (d[u] < kInf && d[u] + arcs_[a].cost < d[v]) {
          d[v] = d[u] + arcs_[a].cost;
          relaxed = true;
        }
      }
      if (!relaxed) return d;
    }
    throw std::logic_error("residual negative cycle");
  }

  const std::vector<McfArc>& arcs() const { return arcs_; }
  std::vector<McfArc>& arcs() { return arcs_; }
  const std::vector<std::vector<int>>& head() const { return head_; }

 private:
  bool dijkstra(int s, int t) {
    std::fill(dist_.begin(), dist_.end(), kInf);
    dist_[s] = 0;
    using Item = std::pair<int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist_[u]) continue;
      for (int a : head_[u]) {
        if (arcs_[a].flow >= arcs_[a].cap) continue;
        int v = arcs_[a].to;
        int nd = du + arcs_[a].cost + pot_[u] - pot_[v];
        if (nd < dist_[v]) {
          dist_[v] = nd;
          prev_arc_[v] = a;
          pq.push({nd, v});
        }
      }
    }
    return dist_[t] < kInf;
  }

  std::vector<std::vector<int>> head_;
  std::vector<McfArc> arcs_;
  std::vector<int> from_;
  std::vector<int> dist_, pot_, prev_arc_;
};

/// Node layout of the split network: s, t, then 4 nodes per other
/// vertex (cheap in/out, expensive in/out).
struct SplitNet {
  int s_node = 0;
  int t_node = 1;
  std::vector<int> base;  // -1 for s,t

  int in0(int v) const { return base[v]; }
  int out0(int v) const { return base[v] + 1; }
  int in1(int v) const { return base[v] + 2; }
  int out1(int v) const { return base[v] + 3; }
};

}  // namespace

PQStructure pq_structure(const Graph& g, int s, int t, int q) {
  if (q <= 0) throw std::invalid_argument("pq_structure: q must be positive");
  if (s == t || s < 0 || t < 0 || s >= g.num_vertices() || t >= g.num_vertices())
    throw std::invalid_argument("pq_structure: bad terminals");
  {
    auto dist = bfs_distances(g, {s});
    if (dist[t] < 0) throw std::runtime_error("pq_structure: s,t disconnected");
  }

  const int n = g.num_vertices();
  SplitNet net;
  net.base.assign(n, -1);
  int next = 2;
  for (int v = 0; v < n; ++v) {
    if (v == s || v == t) continue;
    net.base[v] = next;
    next += 4;
  }
  const int inf_cap = q + 1;  // no flow exceeds q

  MinCostFlow mcf(next);
  std::vector<int> cheap_arc(n, -1);  // the capacity-1 arc of each vertex
  for (int v = 0; v < n; ++v) {
    if (v == s || v == t) continue;
    cheap_arc[v] = mcf.add_arc(net.in0(v), net.out0(v), 1, 0);
    mcf.add_arc(net.in1(v), net.out1(v), inf_cap, 1);
  }
  auto outs_of = [&](int v) {
    return v == s ? std::vector<int>{net.s_node}
                  : std::vector<int>{net.out0(v), net.out1(v)};
  };
  auto ins_of = [&](int v) {
    return v == t ? std::vector<int>{net.t_node}
                  : std::vector<int>{net.in0(v), net.in1(v)};
  };
  for (auto [u, v] : g.edge_list()) {
    for (int dir = 0; dir < 2; ++dir) {
      int a = dir ? v : u;
      int b = dir ? u : v;
      if (a == t || b == s) continue;  // no arcs out of t or into s
      for (int from : outs_of(a))
        for (int to : ins_of(b)) mcf.add_arc(from, to, inf_cap, 0);
    }
  }

  int sent = mcf.run(net.s_node, net.t_node, q);
  if (sent != q) throw std::logic_error("pq_structure: flow of value q infeasible");
  long primal_cost = 0;
  for (std::size_t a = 0; a < mcf.arcs().size(); a += 2)
    primal_cost += static_cast<long>(mcf.arcs()[a].flow) * mcf.arcs()[a].cost;

  // Canonical duals: true residual distances give the potentials; the
  // capacity dual of each unit arc is the positive part of its
  // potential gap.
  auto d = mcf.residual_distances(net.s_node);
  PQStructure pq;
  pq.q = q;
  pq.s = s;
  pq.t = t;
  pq.y0.assign(n, -1);
  pq.y1.assign(n, -1);
  pq.z.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    if (v == s || v == t) continue;
    int zv = std::max(0, d[net.out0(v)] - d[net.in0(v)]);
    if (zv > 1) throw std::logic_error("pq_structure: non-binary capacity dual");
    if (zv == 1 && mcf.arcs()[cheap_arc[v]].flow != 1)
      throw std::logic_error("pq_structure: dual positive on slack arc");
    pq.z[v] = static_cast<char>(zv);
  }
  pq.p = d[net.t_node];

  // Entry-weight distances in the copy graph pin the labels y.
  {
    std::vector<int> ds(2 * n + 2, kInf);  // per vertex: copy0, copy1; s,t at 2n,2n+1
    auto id0 = [&](int v) { return 2 * v; };
    auto id1 = [&](int v) { return 2 * v + 1; };
    auto idv = [&](int v) { return v == s ? 2 * n : 2 * n + 1; };
    using Item = std::pair<int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    ds[idv(s)] = 0;
    heap.push({0, idv(s)});
    auto weight_of = [&](int node) {
      if (node >= 2 * n) return 0;
      int v = node / 2;
      return (node % 2) ? 1 : static_cast<int>(pq.z[v]);
    };
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du != ds[u]) continue;
      int gv = u >= 2 * n ? (u == 2 * n ? s : t) : u / 2;
      for (int w : g.neighbors(gv)) {
        std::vector<int> targets;
        if (w == s || w == t)
          targets = {idv(w)};
        else
          targets = {id0(w), id1(w)};
        for (int tgt : targets) {
          int nd = du + weight_of(tgt);
          if (nd < ds[tgt]) {
            ds[tgt] = nd;
            heap.push({nd, tgt});
          }
        }
      }
    }
    if (ds[idv(t)] != pq.p)
      throw std::logic_error("pq_structure: label distance mismatch");
    for (int v = 0; v < n; ++v) {
      if (v == s || v == t) continue;
      pq.y0[v] = ds[id0(v)];
      pq.y1[v] = ds[id1(v)];
    }
  }

  // Strong duality pins the labels: the flow cost must equal the dual
  // objective q*p - sum(z).
  {
    long zsum = 0;
    for (int v = 0; v < n; ++v) zsum += pq.z[v];
    if (primal_cost != static_cast<long>(q) * pq.p - zsum)
      throw std::logic_error("pq_structure: duality gap");
  }

  pq.separators.assign(pq.p, {});
  for (int v = 0; v < n; ++v) {
    if (v == s || v == t || !pq.z[v]) continue;
    if (pq.y0[v] < 1 || pq.y0[v] > pq.p)
      throw std::logic_error("pq_structure: separator label out of range");
    pq.separators[pq.y0[v] - 1].push_back(v);
  }
  for (auto& c : pq.separators) {
    c = normalized(c);
    if (c.empty()) throw std::logic_error("pq_structure: empty separator level");
  }

  // Path extraction: cancel flow cycles, then peel q unit walks and
  // shorten their projections to simple paths.
  {
    auto& arcs = mcf.arcs();
    const auto& head = mcf.head();
    auto positive_arc = [&](int node) {
      for (int a : head[node])
        if (!(a & 1) && arcs[a].flow > 0) return a;
      return -1;
    };
    // Cycle cancellation: walk from any node with outgoing flow that is
    // not reachable in the current peel; easier: repeatedly look for a
    // cycle by walking with a visited stamp from each positive arc.
    {
      std::vector<int> mark(next, -1);
      bool again = true;
      int stamp = 0;
      while (again) {
        again = false;
        for (int start = 0; start < next && !again; ++start) {
          if (start == net.s_node) continue;
          if (positive_arc(start) < 0) continue;
          ++stamp;
          int v = start;
          std::vector<int> walk_arcs;
          while (v != net.t_node && v != net.s_node) {
            if (mark[v] == stamp) {
              // Found a cycle: cancel one unit around it.
              std::vector<int> cyc;
              int u = v;
              for (int i = static_cast<int>(walk_arcs.size()) - 1; i >= 0; --i) {
                cyc.push_back(walk_arcs[i]);
                int tail = arcs[walk_arcs[i] ^ 1].to;
                if (tail == u) break;
              }
              int push = kInf;
              for (int a : cyc) push = std::min(push, arcs[a].flow);
              for (int a : cyc) {
                arcs[a].flow -= push;
                arcs[a ^ 1].flow += push;
              }
              again = true;
              break;
            }
            mark[v] = stamp;
            int a = positive_arc(v);
            if (a < 0) break;  // dead ends at balance; cannot happen mid-walk
            walk_arcs.push_back(a);
            v = arcs[a].to;
          }
        }
      }
    }

    std::vector<int> owner(next, -1);
    std::vector<char> is_in(next, 0);
    for (int u = 0; u < n; ++u) {
      if (u == s || u == t) continue;
      owner[net.in0(u)] = owner[net.out0(u)] = u;
      owner[net.in1(u)] = owner[net.out1(u)] = u;
      is_in[net.in0(u)] = is_in[net.in1(u)] = 1;
    }
    for (int unit = 0; unit < q; ++unit) {
      std::vector<int> nodes{net.s_node};
      int v = net.s_node;
      while (v != net.t_node) {
        int a = positive_arc(v);
        if (a < 0) throw std::logic_error("pq_structure: broken decomposition");
        arcs[a].flow -= 1;
        arcs[a ^ 1].flow += 1;
        v = arcs[a].to;
        nodes.push_back(v);
      }
      std::vector<int> walk{s};
      for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
        if (is_in[nodes[i]]) walk.push_back(owner[nodes[i]]);
      walk.push_back(t);
      // Shorten to a simple path, keeping first occurrences.
      std::vector<int> path;
      for (int u : walk) {
        auto it = std::find(path.begin(), path.end(), u);
        if (it != path.end())
          path.erase(it + 1, path.end());
        else
          path.push_back(u);
      }
      pq.paths.push_back(std::move(path));
    }
  }

  return pq;
}

// ── Verification ─────────────────────────────────────────────────

namespace {

bool is_path_of(const Graph& g, const std::vector<int>& p, int s, int t,
                std::string* why) {
  if (p.empty() || p.front() != s || p.back() != t) {
    *why = "path endpoints wrong";
    return false;
  }
  std::vector<char> seen(g.num_vertices(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[p[i]]) {
      *why = "path repeats a vertex";
      return false;
    }
    seen[p[i]] = 1;
    if (i + 1 < p.size() && !g.has_edge(p[i], p[i + 1])) {
      *why = "path uses a non-edge";
      return false;
    }
  }
  return true;
}

}  // namespace

VertexSet public_vertices(const PQStructure& pq, int i) {
  VertexSet pub;
  for (int v : pq.paths[i]) {
    if (v == pq.s || v == pq.t) continue;
    bool shared = false;
    for (int j = 0; j < static_cast<int>(pq.paths.size()) && !shared; ++j) {
      if (j == i) continue;
      for (int w : pq.paths[j])
        if (w == v) {
          shared = true;
          break;
        }
    }
    if (shared) pub.push_back(v);
  }
  return normalized(pub);
}

PqVerification verify_pq_structure(const Graph& g, int s, int t,
                                   const PQStructure& pq) {
  PqVerification rep;
  const int n = g.num_vertices();

  if (static_cast<int>(pq.paths.size()) != pq.q) {
    rep.violation = "wrong number of paths";
    return rep;
  }
  for (const auto& p : pq.paths) {
    std::string why;
    if (!is_path_of(g, p, s, t, &why)) {
      rep.violation = why;
      return rep;
    }
  }
  if (static_cast<int>(pq.separators.size()) != pq.p) {
    rep.violation = "wrong number of separators";
    return rep;
  }

  // Separators: nonempty, exclude s,t, pairwise disjoint.
  std::vector<int> sep_of(n, -1);
  for (int j = 0; j < pq.p; ++j) {
    if (pq.separators[j].empty()) {
      rep.violation = "empty separator C" + std::to_string(j + 1);
      return rep;
    }
    for (int v : pq.separators[j]) {
      if (v == s || v == t) {
        rep.violation = "separator contains a terminal";
        return rep;
      }
      if (sep_of[v] >= 0) {
        rep.violation = "separators not disjoint";
        return rep;
      }
      sep_of[v] = j;
    }
  }

  // Property 1: each path meets each separator exactly once, in order.
  for (int i = 0; i < pq.q; ++i) {
    std::vector<int> hits;
    for (int v : pq.paths[i])
      if (v != s && v != t && sep_of[v] >= 0) hits.push_back(sep_of[v]);
    std::vector<int> expect(pq.p);
    for (int j = 0; j < pq.p; ++j) expect[j] = j;
    if (hits != expect) {
      rep.violation = "path " + std::to_string(i) +
                      " does not cross the chain exactly once in order";
      return rep;
    }
  }

  // Property 2: shared internal vertices lie on separators.
  std::vector<int> on_paths(n, 0);
  for (const auto& p : pq.paths)
    for (int v : p)
      if (v != s && v != t) ++on_paths[v];
  for (int v = 0; v < n; ++v) {
    if (on_paths[v] >= 2 && sep_of[v] < 0) {
      rep.violation = "shared vertex off the chain";
      return rep;
    }
  }

  // Property 3: every separator vertex lies on some path.
  for (int v = 0; v < n; ++v) {
    if (sep_of[v] >= 0 && on_paths[v] == 0) {
      rep.violation = "separator vertex on no path";
      return rep;
    }
  }

  // Chain property by reachability: deleting C_j cuts s from t, and
  // cuts s from every later separator.
  for (int j = 0; j < pq.p; ++j) {
    std::vector<char> deleted(n, 0);
    for (int v : pq.separators[j]) deleted[v] = 1;
    auto dist = bfs_distances(g, {s}, &deleted);
    if (dist[t] >= 0) {
      rep.violation = "C" + std::to_string(j + 1) + " is not an (s,t)-separator";
      return rep;
    }
    for (int jj = j + 1; jj < pq.p; ++jj)
      for (int v : pq.separators[jj])
        if (dist[v] >= 0) {
          rep.violation = "chain order violated";
          return rep;
        }
  }

  rep.valid = true;
  return rep;
}

Dual1Outcome dual1_outcome(const Graph& g, int s, int t, const VertexSet& z0,
                           int p, int q, int k) {
  if (p <= 0 || k <= 0 || q < 2)
    throw std::invalid_argument("dual1_outcome: bad parameters");
  const long k0 = static_cast<long>(z0.size());
  if (static_cast<long>(q - k - 1) * p < k0)
    throw std::invalid_argument("dual1_outcome: q < k + k0/p + 1");

  PQStructure pq = pq_structure(g, s, t, q);
  Dual1Outcome out;
  if (pq.p >= p) {
    out.is_chain = true;
    out.chain.assign(pq.separators.begin(), pq.separators.begin() + p);
    return out;
  }
  for (int i = 0; i < pq.q; ++i) {
    VertexSet pub = public_vertices(pq, i);
    VertexSet priv;
    for (int v : pq.paths[i])
      if (v != s && v != t && !set_contains(pub, v)) priv.push_back(v);
    priv = normalized(priv);
    VertexSet z0_priv = set_intersection(priv, z0);
    if (static_cast<int>(z0_priv.size()) > p) continue;  // ineligible path
    VertexSet qset = set_union(set_union(pub, z0_priv), VertexSet{std::min(s, t), std::max(s, t)});
    out.paths.push_back(pq.paths[i]);
    out.qsets.push_back(qset);
  }
  return out;
}

}  // namespace sparsetd
