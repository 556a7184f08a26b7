#include "sparsetd/improve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "sparsetd/distance.hpp"
#include "sparsetd/flow.hpp"
#include "sparsetd/planar.hpp"

namespace sparsetd {

namespace {

/// Every random step goes through a chooser, so the sampling and the
/// enumeration variants share one code path.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual int choose(int n) = 0;
};

class RngChooser : public Chooser {
 public:
  explicit RngChooser(SplitRng& rng) : rng_(rng) {}
  int choose(int n) override { return n == 1 ? 0 : rng_.uniform(n); }

 private:
  SplitRng& rng_;
};

/// Replays a fixed prefix of choices, takes 0 afterwards, and records
/// (value, width) for the enumeration odometer.
class TraceChooser : public Chooser {
 public:
  explicit TraceChooser(const std::vector<int>& prefix) : prefix_(prefix) {}
  int choose(int n) override {
    int v = pos_ < prefix_.size() ? prefix_[pos_] : 0;
    ++pos_;
    trace_.emplace_back(v, n);
    return v;
  }
  const std::vector<std::pair<int, int>>& trace() const { return trace_; }

 private:
  const std::vector<int>& prefix_;
  std::size_t pos_ = 0;
  std::vector<std::pair<int, int>> trace_;
};

bool heavier_than(long zeta, long factor, long k) {
  // zeta > factor * sqrt(k), exactly.
  return zeta > 0 && zeta * zeta > factor * factor * k;
}

}  // namespace

AnnotatedForest make_annotated_forest(const VertexSet& support,
                                      const std::vector<Edge>& edges,
                                      const std::vector<int>& zeta) {
  AnnotatedForest af;
  af.support = normalized(support);
  af.edges = edges;
  std::sort(af.edges.begin(), af.edges.end());

  // Union-find over the support.
  std::vector<int> parent(af.support.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto idx = [&](int v) {
    return static_cast<int>(std::lower_bound(af.support.begin(), af.support.end(), v) -
                            af.support.begin());
  };
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : af.edges) {
    if (!set_contains(af.support, u) || !set_contains(af.support, v))
      throw std::invalid_argument("annotated forest: edge off the support");
    int a = find(idx(u)), b = find(idx(v));
    if (a == b) throw std::invalid_argument("annotated forest: cycle");
    parent[a] = b;
  }
  std::map<int, VertexSet> groups;
  for (std::size_t i = 0; i < af.support.size(); ++i)
    groups[find(static_cast<int>(i))].push_back(af.support[i]);
  for (auto& [root, verts] : groups) af.comps.push_back(normalized(verts));
  std::sort(af.comps.begin(), af.comps.end(),
            [](const VertexSet& a, const VertexSet& b) { return a[0] < b[0]; });
  if (!zeta.empty()) {
    if (zeta.size() != af.comps.size())
      throw std::invalid_argument("annotated forest: zeta size mismatch");
    af.zeta = zeta;
  } else {
    af.zeta.assign(af.comps.size(), 0);
  }
  return af;
}

namespace {

int heaviest_component(const AnnotatedForest& af) {
  int best = -1;
  for (std::size_t i = 0; i < af.comps.size(); ++i)
    if (best < 0 || af.zeta[i] > af.zeta[best]) best = static_cast<int>(i);
  return best;
}

std::vector<Edge> edges_of_component(const AnnotatedForest& af, int comp) {
  std::vector<Edge> out;
  for (auto e : af.edges)
    if (set_contains(af.comps[comp], e.first)) out.push_back(e);
  return out;
}

ZSplitResult z_split_impl(const AnnotatedForest& af, int delta, Chooser& ch) {
  ZSplitResult res;
  if (af.comps.empty()) return res;
  int j = heaviest_component(af);
  int zeta = af.zeta[j];
  if (zeta <= 1) return res;
  auto comp_edges = edges_of_component(af, j);
  if (comp_edges.empty()) return res;
  int low = (zeta + delta) / (delta + 1);  // ceil(zeta/(delta+1))
  int high = zeta - low;
  if (high < low) return res;

  int e_idx = ch.choose(static_cast<int>(comp_edges.size()));
  int z1 = low + ch.choose(high - low + 1);
  Edge removed = comp_edges[e_idx];

  std::vector<Edge> new_edges;
  for (auto e : af.edges)
    if (e != removed) new_edges.push_back(e);

  // Component containing removed.first keeps guess z1.
  AnnotatedForest next = make_annotated_forest(af.support, new_edges, {});
  for (std::size_t i = 0; i < next.comps.size(); ++i) {
    const VertexSet& nc = next.comps[i];
    if (set_contains(nc, removed.first))
      next.zeta[i] = z1;
    else if (set_contains(nc, removed.second))
      next.zeta[i] = zeta - z1;
    else {
      // Unchanged component: copy its old guess.
      for (std::size_t o = 0; o < af.comps.size(); ++o)
        if (set_contains(af.comps[o], nc[0])) {
          next.zeta[i] = af.zeta[o];
          break;
        }
    }
  }
  res.available = true;
  res.forest = std::move(next);
  return res;
}

}  // namespace

ZSplitResult z_split(const AnnotatedForest& af, int delta, SplitRng& rng) {
  RngChooser ch(rng);
  return z_split_impl(af, delta, ch);
}

// ── The improvement procedure ────────────────────────────────────

namespace {

struct ContractedPair {
  Graph graph;
  int sa = -1, sb = -1;
  std::vector<int> to_full;  // contracted id -> original id (-1 for sa/sb)
  std::vector<int> to_sub;   // original id -> contracted id (-1 if absent/merged)
};

/// G with J_alpha, J_beta contracted to two supervertices; vertices in
/// `drop` removed entirely.
ContractedPair contract_pair(const Graph& g, const VertexSet& ja,
                             const VertexSet& jb, const std::vector<char>& drop) {
  const int n = g.num_vertices();
  ContractedPair res;
  res.to_sub.assign(n, -1);
  std::vector<char> in_a(n, 0), in_b(n, 0);
  for (int v : ja) in_a[v] = 1;
  for (int v : jb) in_b[v] = 1;
  for (int v = 0; v < n; ++v) {
    if (drop[v] || in_a[v] || in_b[v]) continue;
    res.to_sub[v] = static_cast<int>(res.to_full.size());
    res.to_full.push_back(v);
  }
  res.sa = static_cast<int>(res.to_full.size());
  res.sb = res.sa + 1;
  for (int v : ja) res.to_sub[v] = res.sa;
  for (int v : jb) res.to_sub[v] = res.sb;

  std::vector<Edge> edges;
  for (auto [u, v] : g.edge_list()) {
    if (drop[u] || drop[v]) continue;
    int a = res.to_sub[u], b = res.to_sub[v];
    if (a == b || a < 0 || b < 0) continue;
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  res.graph = Graph::from_edges(res.sb + 1, edges);
  return res;
}

struct Runner {
  const Graph& g;
  int k;
  const VertexSet& z0;
  const CandidateSeparation& sep0;
  const ImproveConfig& cfg;
  Chooser& ch;
  const VertexSet* w;
  int theta;

  int n, h, delta = 0, ck, ell, k0;
  VertexSet cut0;          // A° ∩ B°
  std::vector<char> ndz0;  // N^d_G[Z0] membership
  ImproveCaps caps;

  Runner(const Graph& g_, int k_, const VertexSet& z0_,
         const CandidateSeparation& sep0_, const ImproveConfig& cfg_,
         Chooser& ch_, const VertexSet* w_, int theta_)
      : g(g_), k(k_), z0(z0_), sep0(sep0_), cfg(cfg_), ch(ch_), w(w_),
        theta(theta_) {
    n = g.num_vertices();
    h = cfg.h;
    if (h < 4) throw std::invalid_argument("improve: h must be at least 4");
    if (k < 2) throw std::invalid_argument("improve: k must be at least 2");
    cut0 = set_intersection(normalized(sep0.sep.a), normalized(sep0.sep.b));
    ell = static_cast<int>(cut0.size());
    k0 = static_cast<int>(z0.size());
    ck = cfg.c * k;
    VertexSet ball = neighborhood(g, z0, cfg.d);
    ndz0.assign(n, 0);
    for (int v : ball) ndz0[v] = 1;
    resolve_caps();
  }

  void resolve_caps() {
    if (cfg.d == 0) {
      caps.p_used = static_cast<int>(std::ceil(std::sqrt(double(k))));
      caps.q_used = k + static_cast<int>(std::ceil(k0 / std::sqrt(double(k)))) + 1;
      caps.qset_max = 5 * caps.p_used + 2;
    } else {
      int q = std::max<int>(
          2, static_cast<int>(std::ceil(cfg.dist_q_scale *
                                        (k + k0 / std::sqrt(double(k)) + 1))));
      int zstep = static_cast<int>(
          std::ceil(2.0 * std::log2(2.0 * q + 1.0) + 2.0 * cfg.d));
      int p = static_cast<int>(std::ceil(std::sqrt(double(k)))) +
              static_cast<int>(std::ceil(cfg.dist_p_scale *
                                         std::log2(double(k + k0 + 2))));
      p = std::max(p, 3 * zstep + 2 * (cfg.d + 1));  // keep the chain case usable
      caps.p_used = p;
      caps.q_used = q;
      caps.qset_max = 10 * cfg.d * p;
    }
    int deg = 0;
    {
      std::vector<int> count(n, 0);
      for (auto [u, v] : sep0.forest) {
        ++count[u];
        ++count[v];
      }
      for (int v : cut0) deg = std::max(deg, count[v]);
    }
    delta = deg;
    caps.xi = static_cast<int>(std::ceil(cfg.xi_mult * 3.0 * h * (delta + 1) *
                                         std::log2(std::max(k, 2))));
    int pairs = h * (h - 1) / 2;
    caps.cap_c = ell + caps.xi * (2 * caps.q_used + pairs * caps.qset_max);
    caps.cap_c_tilde = caps.xi * pairs * caps.qset_max;
    caps.cap_nv = cfg.d == 0 ? 1 : caps.xi * 2 * caps.q_used + cfg.c;
  }

  ImproveResult fail(ImproveFailure f) {
    ImproveResult res;
    res.failure = f;
    res.caps = caps;
    return res;
  }

  ImproveResult finish(Separation sep, VertexSet c, VertexSet ct) {
    ImproveResult res;
    res.caps = caps;
    // Contract checks on every return.
    if (!is_subset(ct, c)) throw std::logic_error("improve: C~ not inside C");
    VertexSet cut = set_intersection(sep.a, sep.b);
    if (!is_subset(c, cut)) throw std::logic_error("improve: C not inside A∩B");
    for (int v : cut)
      if (ndz0[v] && !set_contains(c, v))
        throw std::logic_error("improve: N^d[Z0] leaked out of C");
    if (static_cast<int>(c.size()) > caps.cap_c)
      throw std::logic_error("improve: C over budget");
    if (static_cast<int>(ct.size()) > caps.cap_c_tilde)
      throw std::logic_error("improve: C~ over budget");
    auto rep = validate_separation(g, sep);
    if (!rep.valid) throw std::logic_error("improve: invalid separation returned");
    if (cfg.d >= 1) {
      // Every d-ball meets the structured part C∖C~ within budget.
      std::vector<int> count(n, 0);
      for (int u : set_difference(c, ct)) {
        auto dist = bfs_distances(g, {u});
        for (int v = 0; v < n; ++v)
          if (dist[v] >= 0 && dist[v] <= cfg.d) ++count[v];
      }
      for (int v = 0; v < n; ++v)
        if (count[v] > caps.cap_nv)
          throw std::logic_error("improve: ball budget exceeded");
    }
    if (w) {
      if (static_cast<int>(set_intersection(sep.a, *w).size()) < theta ||
          static_cast<int>(set_intersection(sep.b, *w).size()) < theta)
        throw std::logic_error("improve: W-balance lost");
    }
    res.tuple = ImproveTuple{std::move(sep), std::move(c), std::move(ct)};
    return res;
  }

  bool heavy(const AnnotatedForest& af) const {
    for (std::size_t i = 0; i < af.comps.size(); ++i)
      if (heavier_than(af.zeta[i], delta + 1, k)) return true;
    return false;
  }

  ImproveResult run() {
    // Precondition checks on the supplied forest.
    AnnotatedForest af0 = make_annotated_forest(cut0, sep0.forest, {});
    if (static_cast<int>(af0.comps.size()) >= h)
      throw std::invalid_argument("improve: forest has too many components");
    if (delta > h)
      throw std::invalid_argument("improve: forest degree exceeds h");

    // Initial guesswork: one pattern-mass guess per component.
    for (std::size_t i = 0; i < af0.comps.size(); ++i)
      af0.zeta[i] = ch.choose(ck + 1);

    while (static_cast<int>(af0.comps.size()) < h && heavy(af0)) {
      auto split = z_split_impl(af0, delta, ch);
      if (!split.available) return fail(ImproveFailure::SplitUnavailable);
      af0 = std::move(split.forest);
    }
    if (!heavy(af0)) {
      VertexSet a = normalized(sep0.sep.a), b = normalized(sep0.sep.b);
      return finish(Separation{a, b}, cut0, {});
    }
    return main_call(normalized(sep0.sep.a), normalized(sep0.sep.b), {}, {}, {},
                     af0, 1);
  }

  ImproveResult main_call(VertexSet a, VertexSet b, VertexSet c, VertexSet dset,
                          VertexSet ct, AnnotatedForest af, int depth) {
    if (depth > caps.xi) return fail(ImproveFailure::DepthExceeded);

    bool a_large;
    if (w)
      a_large = set_intersection(a, *w).size() >= set_intersection(b, *w).size();
    else
      a_large = ch.choose(2) == 0;
    if (!a_large) std::swap(a, b);

    VertexSet ct2, d2;  // accumulated along this level's pair loop
    const auto comps = af.comps;
    std::vector<std::vector<int>> witness_paths;

    for (int alpha = 0; alpha < h; ++alpha) {
      for (int beta = alpha + 1; beta < h; ++beta) {
        const VertexSet& ja = comps[alpha];
        const VertexSet& jb = comps[beta];
        VertexSet x = set_union(set_union(ct2, d2),
                                set_difference(af.support, set_union(ja, jb)));

        std::vector<char> drop(n, 0);
        bool use_x_inside = cfg.d >= 1;  // distance duality keeps X in the graph
        if (!use_x_inside)
          for (int v : x) drop[v] = 1;
        ContractedPair cp = contract_pair(g, ja, jb, drop);

        VertexSet z0_sub;
        for (int v : z0) {
          int sv = cp.to_sub[v];
          if (sv >= 0 && sv != cp.sa && sv != cp.sb) z0_sub.push_back(sv);
        }
        z0_sub = normalized(z0_sub);

        // Connectivity of the two supernodes, in the graph the duality
        // will actually cut (excluding X either way).
        bool connected;
        {
          std::vector<char> del(cp.graph.num_vertices(), 0);
          if (use_x_inside)
            for (int v : x) del[cp.to_sub[v]] = 1;
          auto dist = bfs_distances(cp.graph, {cp.sa}, &del);
          connected = dist[cp.sb] >= 0;
        }

        bool got_chain = false;
        std::vector<VertexSet> chain_full;
        std::vector<std::vector<int>> paths_full;
        std::vector<VertexSet> qsets_full;

        if (!connected) {
          got_chain = true;
          chain_full.push_back({});  // the empty separator
        } else if (cfg.d == 0) {
          Dual1Outcome oc = dual1_outcome(cp.graph, cp.sa, cp.sb, z0_sub,
                                          caps.p_used, caps.q_used, k);
          if (oc.is_chain) {
            got_chain = true;
            for (auto& sep : oc.chain) {
              VertexSet full;
              for (int v : sep) full.push_back(cp.to_full[v]);
              chain_full.push_back(normalized(full));
            }
          } else {
            for (std::size_t i = 0; i < oc.paths.size(); ++i) {
              std::vector<int> path;
              for (int v : oc.paths[i])
                if (v != cp.sa && v != cp.sb) path.push_back(cp.to_full[v]);
              VertexSet qs;
              for (int v : oc.qsets[i])
                if (v != cp.sa && v != cp.sb) qs.push_back(cp.to_full[v]);
              paths_full.push_back(std::move(path));
              qsets_full.push_back(normalized(qs));
            }
          }
        } else {
          DistanceDualParams params;
          params.p = caps.p_used;
          params.q = caps.q_used;
          params.r = caps.p_used;
          params.d = cfg.d;
          params.h = h;
          params.lambda = h * (h + 1) / 2;
          params.k = k;
          params.k0 = k0;
          VertexSet x_sub;
          for (int v : x) x_sub.push_back(cp.to_sub[v]);
          x_sub = normalized(x_sub);
          DistanceDualOutcome oc =
              dual_distance(cp.graph, cp.sa, cp.sb, x_sub, z0_sub, params);
          if (oc.is_chain) {
            got_chain = true;
            for (auto& sep : oc.chain.separators) {
              VertexSet full;
              for (int v : sep) full.push_back(cp.to_full[v]);
              chain_full.push_back(normalized(full));
            }
          } else {
            for (std::size_t i = 0; i < oc.paths.paths.size(); ++i) {
              std::vector<int> path;
              for (int v : oc.paths.paths[i])
                if (v != cp.sa && v != cp.sb) path.push_back(cp.to_full[v]);
              VertexSet qs;
              for (int v : oc.paths.qsets[i])
                if (v != cp.sa && v != cp.sb) qs.push_back(cp.to_full[v]);
              paths_full.push_back(std::move(path));
              qsets_full.push_back(normalized(qs));
            }
          }
        }

        if (!got_chain) {
          // Pick an index whose non-Q part avoids N^d[Z0].
          std::vector<int> eligible;
          for (std::size_t i = 0; i < paths_full.size(); ++i) {
            bool ok = true;
            for (int v : paths_full[i])
              if (!set_contains(qsets_full[i], v) && ndz0[v]) {
                ok = false;
                break;
              }
            if (ok) eligible.push_back(static_cast<int>(i));
          }
          if (eligible.empty()) return fail(ImproveFailure::NoEligiblePath);
          int pick = eligible[ch.choose(static_cast<int>(eligible.size()))];
          ct2 = set_union(ct2, qsets_full[pick]);
          VertexSet rest;
          for (int v : paths_full[pick])
            if (!set_contains(qsets_full[pick], v)) rest.push_back(v);
          d2 = set_union(d2, normalized(rest));
          witness_paths.push_back(paths_full[pick]);
          continue;  // next pair
        }

        // Chain case: pick a separator and uncross.
        int pick = ch.choose(static_cast<int>(chain_full.size()));
        const VertexSet& ci = chain_full[pick];

        // Lift C_i to a separation (A', B') of G.
        VertexSet reach_a;
        {
          std::vector<char> del(cp.graph.num_vertices(), 0);
          for (int v : ci) del[cp.to_sub[v]] = 1;
          if (use_x_inside)
            for (int v : x) del[cp.to_sub[v]] = 1;
          auto dist = bfs_distances(cp.graph, {cp.sa}, &del);
          for (int v = 0; v < cp.graph.num_vertices(); ++v)
            if (dist[v] >= 0 && v != cp.sa && v != cp.sb && cp.to_full[v] >= 0)
              reach_a.push_back(cp.to_full[v]);
        }
        VertexSet a_side = set_union(normalized(ja), normalized(reach_a));
        VertexSet cut_prime = set_union(ci, x);
        VertexSet a_prime = set_union(a_side, cut_prime);
        VertexSet b_prime;
        {
          std::vector<char> in_aside(n, 0);
          for (int v : a_side) in_aside[v] = 1;
          for (int v = 0; v < n; ++v)
            if (!in_aside[v]) b_prime.push_back(v);
        }

        VertexSet jbeta = jb;
        bool pick_a_prime;
        if (w) {
          auto wa = set_intersection(*w, set_intersection(a_prime, a)).size();
          auto wb = set_intersection(*w, set_intersection(b_prime, a)).size();
          pick_a_prime = wa >= wb;
        } else {
          pick_a_prime = ch.choose(2) == 0;
        }
        VertexSet ap = a_prime, bp = b_prime;
        if (!pick_a_prime) {
          std::swap(ap, bp);
          jbeta = ja;
        }

        VertexSet y = set_difference(af.support, jbeta);
        VertexSet a2 = set_union(y, set_intersection(ap, a));
        VertexSet b2 = set_union(y, set_union(bp, b));
        VertexSet cut2 = set_intersection(a2, b2);
        VertexSet c2 = set_intersection(cut2, set_union(set_union(c, ct2), ci));
        VertexSet d2n = set_intersection(cut2, set_union(dset, d2));
        VertexSet ct2n = set_intersection(cut2, set_union(ct, ct2));
        if (set_difference(set_difference(cut2, c2), d2n) != y)
          throw std::logic_error("improve: uncrossing bookkeeping broken");
        if (set_difference(a2, b2).empty() || set_difference(b2, a2).empty())
          return fail(ImproveFailure::DegenerateSeparation);

        // Residual forest without the discarded component.
        std::vector<Edge> y_edges;
        for (auto e : af.edges)
          if (!set_contains(jbeta, e.first)) y_edges.push_back(e);
        std::vector<int> y_zeta;
        AnnotatedForest star = make_annotated_forest(y, y_edges, {});
        for (std::size_t i = 0; i < star.comps.size(); ++i) {
          for (std::size_t o = 0; o < af.comps.size(); ++o)
            if (set_contains(af.comps[o], star.comps[i][0])) {
              star.zeta[i] = af.zeta[o];
              break;
            }
        }

        if (heavy(star)) {
          auto split = z_split_impl(star, delta, ch);
          if (!split.available) return fail(ImproveFailure::SplitUnavailable);
          return main_call(std::move(a2), std::move(b2), std::move(c2),
                           std::move(d2n), std::move(ct2n),
                           std::move(split.forest), depth + 1);
        }
        return finish(Separation{std::move(a2), std::move(b2)},
                      set_union(c2, y), ct2n);
      }
    }

    // Every pair produced a path: the picked paths plus the components
    // witness a clique minor.
    ImproveResult res = fail(ImproveFailure::MinorFound);
    MinorWitness wit;
    wit.branch_sets = comps;
    wit.connecting_paths = witness_paths;
    res.witness = std::move(wit);
    return res;
  }
};

ImproveResult improve_run(const Graph& g, int k, const VertexSet& z0,
                          const CandidateSeparation& sep0,
                          const ImproveConfig& cfg, Chooser& ch,
                          const VertexSet* w, int theta) {
  Runner runner(g, k, z0, sep0, cfg, ch, w, theta);
  return runner.run();
}

}  // namespace

ImproveResult improve_sample(const Graph& g, int k, const VertexSet& z0,
                             const CandidateSeparation& sep0,
                             const ImproveConfig& cfg, SplitRng& rng,
                             const VertexSet* w, int theta) {
  RngChooser ch(rng);
  return improve_run(g, k, z0, sep0, cfg, ch, w, theta);
}

ImproveFamily improve_enumerate(const Graph& g, int k, const VertexSet& z0,
                                const CandidateSeparation& sep0,
                                const ImproveConfig& cfg) {
  ImproveFamily fam;
  std::vector<int> prefix;
  for (;;) {
    TraceChooser ch(prefix);
    ImproveResult res = improve_run(g, k, z0, sep0, cfg, ch, nullptr, 0);
    fam.caps = res.caps;
    ++fam.leaves;
    if (res.tuple) fam.tuples.push_back(*res.tuple);
    if (fam.leaves >= cfg.enum_budget) {
      fam.budget_exceeded = true;
      break;
    }
    const auto& trace = ch.trace();
    int i = static_cast<int>(trace.size()) - 1;
    while (i >= 0 && trace[i].first + 1 >= trace[i].second) --i;
    if (i < 0) break;
    prefix.clear();
    for (int j = 0; j < i; ++j) prefix.push_back(trace[j].first);
    prefix.push_back(trace[i].first + 1);
  }
  std::sort(fam.tuples.begin(), fam.tuples.end());
  fam.tuples.erase(std::unique(fam.tuples.begin(), fam.tuples.end()),
                   fam.tuples.end());
  return fam;
}

}  // namespace sparsetd
