#pragma once

// Explicit finite realisation of the C-dual: vertex enumeration, metric
// table, P-convex sets and gates, gated balls, median-graph and Helly
// recognisers, and fixed points of finite group actions.

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "walldual/chain_system.hpp"
#include "walldual/common.hpp"
#include "walldual/wallspace.hpp"

namespace walldual {

using Metric = std::vector<std::uint32_t>;

struct DualSpace {
  std::shared_ptr<const Wallspace> ws;
  ChainSystem system = ChainSystem::all_subsets();
  std::vector<Orientation> vertices;
  std::unordered_map<Orientation, VertexId, OrientationHash> index;
  Metric metric;  // row-major n x n
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<VertexId> principal;  // vertex of each point's principal ultrafilter

  std::size_t size() const { return vertices.size(); }
  std::uint32_t dist(VertexId a, VertexId b) const { return metric[static_cast<std::size_t>(a) * vertices.size() + b]; }
  std::optional<VertexId> find(const Orientation& o) const {
    auto it = index.find(o);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  VertexId at(const Orientation& o) const {
    auto v = find(o);
    if (!v) throw Error(ErrorCode::kInvalidArgument, "orientation " + o.str() + " is not a vertex of the dual");
    return *v;
  }
  std::uint32_t diameter() const { return metric.empty() ? 0 : *std::max_element(metric.begin(), metric.end()); }
};

struct DualOptions {
  std::size_t vertex_cap = std::size_t{1} << 18;
  std::size_t sweep_max_walls = 20;  // exhaustive orientation sweep below this
  bool compute_metric = true;
  SearchLimits limits;
};

namespace detail {

// Can wall h be flipped in consistent o while staying consistent?
inline bool flip_ok(const Wallspace& ws, const Orientation& o, WallId h) {
  const Side s = opposite(o[h]);
  for (WallId k = 0; k < ws.wall_count(); ++k)
    if (k != h && ws.disjoint(h, s, k, o[k])) return false;
  return true;
}

inline void fill_metric(DualSpace& d, const SearchLimits& limits) {
  const std::size_t n = d.vertices.size();
  d.metric.assign(n * n, 0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto v = static_cast<std::uint32_t>(dist_C(d.system, *d.ws, d.vertices[i], d.vertices[j], limits));
      d.metric[i * n + j] = v;
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.metric[j * n + i] = d.metric[i * n + j];
  d.edges.clear();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d.metric[i * n + j] == 1) d.edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
}

inline void finalize_vertices(DualSpace& d, std::vector<Orientation> verts) {
  std::sort(verts.begin(), verts.end(), [](const Orientation& a, const Orientation& b) { return a.str() < b.str(); });
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  d.vertices = std::move(verts);
  d.index.clear();
  for (std::size_t i = 0; i < d.vertices.size(); ++i) d.index.emplace(d.vertices[i], static_cast<VertexId>(i));
  d.principal.clear();
  for (PointId s = 0; s < d.ws->point_count(); ++s) d.principal.push_back(d.at(principal_ultrafilter(*d.ws, s)));
}

}  // namespace detail

inline DualSpace enumerate_dual(const Wallspace& ws, const ChainSystem& cs, const DualOptions& opt = {}) {
  if (ws.point_count() == 0) throw Error(ErrorCode::kInvalidArgument, "wallspace has no points");
  DualSpace d;
  d.ws = std::make_shared<const Wallspace>(ws);
  d.system = cs;
  std::unordered_set<Orientation, OrientationHash> seen;
  std::vector<Orientation> verts;
  auto add = [&](const Orientation& o) {
    if (!seen.insert(o).second) return false;
    if (seen.size() > opt.vertex_cap)
      throw Error(ErrorCode::kStateExplosion, "dual vertex count exceeds cap " + std::to_string(opt.vertex_cap));
    verts.push_back(o);
    return true;
  };
  std::deque<Orientation> queue;
  for (PointId s = 0; s < ws.point_count(); ++s) {
    auto o = principal_ultrafilter(ws, s);
    if (add(o)) queue.push_back(o);
  }
  while (!queue.empty()) {
    Orientation o = queue.front();
    queue.pop_front();
    for (WallId h = 0; h < ws.wall_count(); ++h) {
      if (!detail::flip_ok(ws, o, h)) continue;
      Orientation n = o;
      n.flip(h);
      if (add(n)) queue.push_back(std::move(n));
    }
  }
  if (ws.wall_count() <= opt.sweep_max_walls) {
    // Gray-code sweep over all orientations, tracking the number of
    // disjoint chosen pairs incrementally.
    const std::size_t P = ws.wall_count();
    Orientation o(P);
    long bad = 0;
    for (WallId h = 0; h < P; ++h)
      for (WallId k = h + 1; k < P; ++k)
        if (ws.disjoint(h, o[h], k, o[k])) ++bad;
    const std::uint64_t total = std::uint64_t{1} << P;
    for (std::uint64_t step = 0;; ++step) {
      if (bad == 0 && !seen.count(o)) add(o);
      if (step + 1 == total) break;
      const auto h = static_cast<WallId>(__builtin_ctzll(step + 1));
      for (WallId k = 0; k < P; ++k)
        if (k != h && ws.disjoint(h, o[h], k, o[k])) --bad;
      o.flip(h);
      for (WallId k = 0; k < P; ++k)
        if (k != h && ws.disjoint(h, o[h], k, o[k])) ++bad;
    }
  }
  detail::finalize_vertices(d, std::move(verts));
  if (opt.compute_metric) detail::fill_metric(d, opt.limits);
  return d;
}

// Dual with a caller-supplied vertex list and edge set; the metric table is
// still dist_C. Used for recogniser tests on graphs that are not duals.
inline DualSpace make_dual(const Wallspace& ws, const ChainSystem& cs, std::vector<Orientation> vertices,
                           std::optional<std::vector<std::pair<VertexId, VertexId>>> edges = std::nullopt) {
  DualSpace d;
  d.ws = std::make_shared<const Wallspace>(ws);
  d.system = cs;
  std::sort(vertices.begin(), vertices.end(), [](const Orientation& a, const Orientation& b) { return a.str() < b.str(); });
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  d.vertices = std::move(vertices);
  for (std::size_t i = 0; i < d.vertices.size(); ++i) d.index.emplace(d.vertices[i], static_cast<VertexId>(i));
  for (PointId s = 0; s < ws.point_count(); ++s) {
    auto v = d.find(principal_ultrafilter(ws, s));
    if (v) d.principal.push_back(*v);
  }
  detail::fill_metric(d, {});
  if (edges) d.edges = std::move(*edges);
  return d;
}

// All-pairs BFS distances in the graph (vertices, edges); unreachable pairs
// get UINT32_MAX.
inline Metric graph_metric(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  Metric m(n * n, UINT32_MAX);
  parallel_for(n, [&](std::size_t s) {
    std::deque<VertexId> q{static_cast<VertexId>(s)};
    m[s * n + s] = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (auto v : adj[u])
        if (m[s * n + v] == UINT32_MAX) {
          m[s * n + v] = m[s * n + u] + 1;
          q.push_back(v);
        }
    }
  });
  return m;
}

// ------------------------------------------------------------- P-convexity

struct PConvexSet {
  Bits support;
  Bits signs;
  Bits forced;         // every wall on which all members agree
  Bits forced_signs;
  bool nonempty = false;
  std::vector<VertexId> members;
};

// Builds the P-convex set cut out by (support, signs). Forced walls are
// closed under halfspace inclusion; by the ultrafilter lemma this is
// exactly the set of walls on which all members agree.
inline PConvexSet make_pconvex(const DualSpace& d, const Bits& support, const Bits& signs) {
  const Wallspace& ws = *d.ws;
  const std::size_t P = ws.wall_count();
  PConvexSet c;
  c.support = support;
  c.signs = signs;
  c.forced = support;
  c.forced_signs = signs & support;
  Filter f(P);
  for (auto h : members_of(support)) f.fix(h, signs.test(h) ? Side::kPlus : Side::kMinus);
  c.nonempty = is_filter(ws, f);
  if (c.nonempty) {
    for (auto h : members_of(support)) {
      const Side s = f[h];
      for (WallId k = 0; k < P; ++k) {
        if (k == h) continue;
        for (Side b : {Side::kMinus, Side::kPlus})
          if (ws.included(h, s, k, b)) {
            c.forced.set(k);
            c.forced_signs.set(k, b == Side::kPlus);
          }
      }
    }
  }
  for (std::size_t v = 0; v < d.size(); ++v) {
    const Bits& o = d.vertices[v].bits();
    if (((o ^ signs) & support).none()) c.members.push_back(static_cast<VertexId>(v));
  }
  return c;
}

inline PConvexSet halfspace_set(const DualSpace& d, WallId h, Side s) {
  Bits sup(d.ws->wall_count()), sg(d.ws->wall_count());
  sup.set(h);
  sg.set(h, s == Side::kPlus);
  return make_pconvex(d, sup, sg);
}

// Smallest P-convex set containing the given orientations.
inline PConvexSet hull(const DualSpace& d, const std::vector<Orientation>& pts) {
  if (pts.empty()) throw Error(ErrorCode::kEmptyTarget, "hull of no points");
  Bits agree(d.ws->wall_count());
  agree.set();
  for (const auto& p : pts) agree &= ~(p.bits() ^ pts.front().bits());
  return make_pconvex(d, agree, pts.front().bits() & agree);
}

inline Orientation gate(const DualSpace& d, const PConvexSet& c, const Orientation& z) {
  (void)d;
  if (!c.nonempty) throw Error(ErrorCode::kEmptyTarget, "gate target is empty");
  Bits flip = (z.bits() ^ c.forced_signs) & c.forced;
  return Orientation(z.bits() ^ flip);
}

// Nested medians mu(a_n, x, mu(a_{n-1}, x, ... mu(a_2, x, a_1))).
inline Orientation gate_via_medians(const std::vector<Orientation>& targets, const Orientation& x) {
  if (targets.empty()) throw Error(ErrorCode::kEmptyTarget, "no targets");
  Orientation acc = targets.front();
  for (std::size_t i = 1; i < targets.size(); ++i) acc = median(targets[i], x, acc);
  return acc;
}

struct GateReport {
  bool pass = true;
  std::size_t instances = 0;
  std::size_t pairs = 0;  // (u, v) pairs checked for 1-Lipschitzness
  std::uint64_t seed = 0;
  std::string failure;
};

// Random (targets, x) instances: the gate to hull(targets) lands in the
// hull, is idempotent, is 1-Lipschitz over all vertex pairs, and agrees
// with the nested-median formula.
inline GateReport check_gate_calculus(const DualSpace& d, std::size_t instances = 200, std::uint64_t seed = 1,
                                      std::size_t max_targets = 4) {
  GateReport rep;
  rep.seed = seed;
  if (d.size() == 0) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(d.size() - 1));
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, max_targets));
  auto fail = [&](std::string why) {
    if (rep.pass) rep.failure = std::move(why);
    rep.pass = false;
  };
  for (std::size_t it = 0; it < instances; ++it) {
    std::vector<Orientation> targets;
    for (std::size_t k = count(rng); k > 0; --k) targets.push_back(d.vertices[pick(rng)]);
    const Orientation& x = d.vertices[pick(rng)];
    const auto C = hull(d, targets);
    std::vector<VertexId> g(d.size());
    for (VertexId u = 0; u < d.size(); ++u) {
      auto gu = gate(d, C, d.vertices[u]);
      auto id = d.find(gu);
      if (!id || !std::binary_search(C.members.begin(), C.members.end(), *id)) {
        fail("gate of " + d.vertices[u].str() + " is not in the target set");
        g[u] = u;
        continue;
      }
      g[u] = *id;
      if (gate(d, C, gu) != gu) fail("gate is not idempotent at " + d.vertices[u].str());
    }
    for (VertexId u = 0; u < d.size(); ++u)
      for (VertexId v = u + 1; v < d.size(); ++v) {
        ++rep.pairs;
        if (d.dist(g[u], g[v]) > d.dist(u, v))
          fail("gate is not 1-Lipschitz on " + d.vertices[u].str() + ", " + d.vertices[v].str());
      }
    if (gate_via_medians(targets, x) != gate(d, C, x)) fail("median formula disagrees with the gate at " + x.str());
    ++rep.instances;
  }
  return rep;
}

// --------------------------------------------------------------- gated balls

// depth[h] = length of the longest member of C whose walls all lie weakly
// between x and h, with h itself on top. B(x,r) is cut out by the walls of
// depth > r, oriented as x: a separating member of size r+1 tops out at such
// a wall, and each such wall tops a member of size r+1. Requires a system
// of chains.
inline std::vector<std::size_t> ball_depths(const ChainSystem& cs, const Wallspace& ws, const Orientation& x,
                                            const SearchLimits& limits = {}) {
  const auto P = static_cast<WallId>(ws.wall_count());
  std::vector<std::size_t> depth(P, 0);
  auto upto = [&](WallId h) {
    Bits b(P);
    b.set(h);
    for (WallId k = 0; k < P; ++k)
      if (precedes(ws, {k, x[k]}, {h, x[h]})) b.set(k);
    return b;
  };
  if (cs.kind() == SystemKind::kAllSubsets) throw Error(ErrorCode::kInvalidArgument, "balls are gated only for systems of chains");
  if (cs.kind() == SystemKind::kExplicit) {
    for (WallId h = 0; h < P; ++h) {
      Bits b = upto(h);
      for (const auto& m : cs.members())
        if (m.test(h)) depth[h] = std::max(depth[h], (m & b).count());
    }
    return depth;
  }
  const auto& pred = *cs.predicate();
  if (!pred.interval_closed()) {
    for (WallId h = 0; h < P; ++h) {
      std::vector<OrientedWall> cand;
      for (auto k : members_of(upto(h))) cand.push_back({k, x[k]});
      depth[h] = detail::longest_witnessed(ws, pred, std::move(cand), limits, OrientedWall{h, x[h]}).size();
    }
    return depth;
  }
  // One DAG pass: best[u][w] = longest admissible path ending at witness w of u.
  std::vector<OrientedWall> order;
  for (WallId h = 0; h < P; ++h) order.push_back({h, x[h]});
  std::sort(order.begin(), order.end(), [&](OrientedWall a, OrientedWall b) {
    auto sa = lower_size(ws, a), sb = lower_size(ws, b);
    return sa != sb ? sa < sb : a.wall < b.wall;
  });
  std::vector<std::vector<std::size_t>> best(P);
  for (std::size_t bi = 0; bi < order.size(); ++bi) {
    const auto zb = order[bi];
    best[zb.wall].assign(pred.witness_count(zb.wall), 1);
    for (std::size_t ai = 0; ai < bi; ++ai) {
      const auto za = order[ai];
      if (!precedes(ws, za, zb)) continue;
      for (std::uint32_t j = 0; j < best[zb.wall].size(); ++j)
        for (std::uint32_t i = 0; i < best[za.wall].size(); ++i)
          if (best[za.wall][i] + 1 > best[zb.wall][j] && pred.admissible(za, i, zb, j)) best[zb.wall][j] = best[za.wall][i] + 1;
    }
    for (auto v : best[zb.wall]) depth[zb.wall] = std::max(depth[zb.wall], v);
  }
  return depth;
}

inline PConvexSet ball_from_depths(const DualSpace& d, const Orientation& x, const std::vector<std::size_t>& depth,
                                   std::size_t r) {
  Bits sup(d.ws->wall_count());
  for (WallId h = 0; h < depth.size(); ++h)
    if (depth[h] > r) sup.set(h);
  return make_pconvex(d, sup, x.bits() & sup);
}

inline PConvexSet ball_as_pconvex(const DualSpace& d, const Orientation& x, std::size_t r) {
  return ball_from_depths(d, x, ball_depths(d.system, *d.ws, x), r);
}

// ------------------------------------------------------------ recognisers

struct MedianGraphReport {
  bool pass = true;
  bool exhaustive = true;
  std::size_t triples = 0;
  std::uint64_t seed = 0;
  std::array<VertexId, 3> witness{};
  std::string reason;
};

// Median algebra axioms for majority vote on the vertex set: closure,
// majority and the distributive law. Holds on every dual, whatever its
// metric; triples are exhaustive up to exhaustive_max vertices.
inline MedianGraphReport verify_median_axioms(const DualSpace& d, std::size_t exhaustive_max = 64,
                                              std::size_t samples = 100'000, std::uint64_t seed = 1) {
  MedianGraphReport rep;
  rep.seed = seed;
  const std::size_t n = d.size();
  if (n == 0) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  auto fail = [&](VertexId a, VertexId b, VertexId c, std::string why) {
    if (!rep.pass) return;
    rep.pass = false;
    rep.witness = {a, b, c};
    rep.reason = std::move(why);
  };
  auto triple = [&](VertexId a, VertexId b, VertexId c) {
    const auto& x = d.vertices;
    ++rep.triples;
    if (!d.find(median(x[a], x[b], x[c]))) fail(a, b, c, "median is not a vertex");
    if (median(x[a], x[a], x[b]) != x[a]) fail(a, b, c, "majority law fails");
  };
  rep.exhaustive = n <= exhaustive_max;
  if (rep.exhaustive) {
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a; b < n; ++b)
        for (VertexId c = b; c < n; ++c) triple(a, b, c);
  } else {
    for (std::size_t i = 0; i < samples; ++i) triple(pick(rng), pick(rng), pick(rng));
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(samples, 10'000); ++i) {
    const auto& x = d.vertices;
    const VertexId a = pick(rng), b = pick(rng), c = pick(rng), e = pick(rng), f = pick(rng);
    if (median(median(x[a], x[b], x[c]), x[e], x[f]) != median(median(x[a], x[e], x[f]), x[b], median(x[c], x[e], x[f])))
      fail(a, b, c, "distributive law fails");
  }
  return rep;
}

inline MedianGraphReport verify_median_graph(const DualSpace& d, std::size_t exhaustive_max = 512,
                                             std::size_t samples = 200'000, std::uint64_t seed = 1) {
  MedianGraphReport rep;
  rep.seed = seed;
  const std::size_t n = d.size();
  if (n == 0) return rep;
  Metric g = graph_metric(n, d.edges);
  for (auto v : g)
    if (v == UINT32_MAX) {
      rep.pass = false;
      rep.reason = "graph disconnected";
      return rep;
    }
  auto interval = [&](std::size_t a, std::size_t b) {
    Bits I(n);
    for (std::size_t z = 0; z < n; ++z)
      if (g[a * n + z] + g[z * n + b] == g[a * n + b]) I.set(z);
    return I;
  };
  auto check = [&](std::size_t a, std::size_t b, std::size_t c, const Bits& ab, const Bits& bc, const Bits& ac) -> std::string {
    Bits m = ab & bc & ac;
    if (m.count() != 1) return "triple has " + std::to_string(m.count()) + " medians";
    auto mu = median(d.vertices[a], d.vertices[b], d.vertices[c]);
    auto v = d.find(mu);
    if (!v || *v != m.find_first()) return "graph median differs from majority vote";
    return {};
  };
  if (n <= exhaustive_max) {
    std::vector<Bits> I(n * n);
    parallel_for(n, [&](std::size_t a) {
      for (std::size_t b = 0; b < n; ++b) I[a * n + b] = interval(a, b);
    });
    std::vector<std::string> fail(n);
    std::vector<std::array<VertexId, 3>> wit(n);
    parallel_for(n, [&](std::size_t a) {
      for (std::size_t b = a; b < n && fail[a].empty(); ++b)
        for (std::size_t c = b; c < n; ++c) {
          auto why = check(a, b, c, I[a * n + b], I[b * n + c], I[a * n + c]);
          if (!why.empty()) {
            fail[a] = why;
            wit[a] = {static_cast<VertexId>(a), static_cast<VertexId>(b), static_cast<VertexId>(c)};
            break;
          }
        }
    });
    rep.triples = n * (n + 1) * (n + 2) / 6;
    for (std::size_t a = 0; a < n; ++a)
      if (!fail[a].empty()) {
        rep.pass = false;
        rep.reason = fail[a];
        rep.witness = wit[a];
        return rep;
      }
    return rep;
  }
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < samples; ++t) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    ++rep.triples;
    auto why = check(a, b, c, interval(a, b), interval(b, c), interval(a, c));
    if (!why.empty()) {
      rep.pass = false;
      rep.reason = why;
      rep.witness = {static_cast<VertexId>(a), static_cast<VertexId>(b), static_cast<VertexId>(c)};
      return rep;
    }
  }
  return rep;
}

struct Ball {
  VertexId center = 0;
  std::uint32_t radius = 0;
};

struct HellyReport {
  bool pass = true;
  bool exhaustive = true;
  bool geodesic = true;  // metric equals the graph metric of its unit edges
  std::size_t triples = 0;
  std::size_t family_cap = 0;
  std::uint64_t seed = 0;
  std::array<VertexId, 3> triple{};
  std::vector<Ball> family;  // minimised failing family
};

// Helly property of integer balls via the Berge-Duchet criterion: the ball
// hypergraph is Helly iff for all a,b,c the balls containing two of them
// have a common point. This decides families of every size; family_cap is
// recorded and bounds the reported counterexample.
inline HellyReport verify_helly(const DualSpace& d, std::size_t family_cap = 5, std::size_t exhaustive_max = 400,
                                std::size_t samples = 200'000, std::uint64_t seed = 1) {
  HellyReport rep;
  rep.family_cap = family_cap;
  rep.seed = seed;
  const std::size_t n = d.size();
  if (n == 0) return rep;
  const Metric& m = d.metric;
  rep.geodesic = graph_metric(n, d.edges) == m;
  const std::uint32_t diam = d.diameter();
  // balls[v][r] for r = 0..diam
  std::vector<std::vector<Bits>> balls(n, std::vector<Bits>(diam + 1, Bits(n)));
  parallel_for(n, [&](std::size_t v) {
    for (std::size_t z = 0; z < n; ++z)
      for (std::uint32_t r = m[v * n + z]; r <= diam; ++r) balls[v][r].set(z);
  });
  auto med = [&](std::size_t v, std::size_t a, std::size_t b, std::size_t c) {
    std::array<std::uint32_t, 3> t{m[v * n + a], m[v * n + b], m[v * n + c]};
    std::sort(t.begin(), t.end());
    return t[1];
  };
  auto test = [&](std::size_t a, std::size_t b, std::size_t c) {
    Bits k = balls[a][med(a, a, b, c)] & balls[b][med(b, a, b, c)] & balls[c][med(c, a, b, c)];
    for (std::size_t v = 0; v < n && k.any(); ++v) k &= balls[v][med(v, a, b, c)];
    return k.any();
  };
  auto record = [&](std::size_t a, std::size_t b, std::size_t c) {
    rep.pass = false;
    rep.triple = {static_cast<VertexId>(a), static_cast<VertexId>(b), static_cast<VertexId>(c)};
    std::vector<Ball> fam;
    for (std::size_t v = 0; v < n; ++v) fam.push_back({static_cast<VertexId>(v), med(v, a, b, c)});
    auto empty_inter = [&](const std::vector<Ball>& f) {
      Bits k(n);
      k.set();
      for (auto bl : f) k &= balls[bl.center][bl.radius];
      return k.none();
    };
    for (std::size_t i = 0; i < fam.size();) {
      auto trial = fam;
      trial.erase(trial.begin() + static_cast<long>(i));
      if (empty_inter(trial)) fam = std::move(trial);
      else ++i;
    }
    rep.family = fam;
  };
  if (n <= exhaustive_max) {
    std::vector<std::array<std::size_t, 3>> bad(n, {SIZE_MAX, 0, 0});
    parallel_for(n, [&](std::size_t a) {
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c)
          if (!test(a, b, c)) {
            bad[a] = {a, b, c};
            return;
          }
    });
    rep.triples = n * (n - 1) * (n - 2) / 6;
    for (auto t : bad)
      if (t[0] != SIZE_MAX) {
        record(t[0], t[1], t[2]);
        return rep;
      }
    return rep;
  }
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < samples; ++t) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    ++rep.triples;
    if (!test(a, b, c)) {
      record(a, b, c);
      return rep;
    }
  }
  return rep;
}

// ------------------------------------------------------ finite group actions

using Permutation = std::vector<PointId>;

struct SubdivisionPoint {
  Orientation base;  // meaningful off `inward`
  Bits inward;       // doubled walls whose copies point toward each other
};

struct FixedPointReport {
  SubdivisionPoint point;
  std::size_t group_order = 0;
  std::vector<PointId> orbit;
  Bits majority, invariant, remainder;  // Q, Q', and everything else
  bool verified = false;
  std::string failure;
};

namespace detail {

struct WallImage {
  WallId wall;
  bool swaps;  // g(h^-) is the plus side of the image wall
};

inline std::vector<WallImage> act_on_walls(const Wallspace& ws, const Permutation& g) {
  const std::size_t n = ws.point_count();
  std::vector<WallImage> out;
  for (WallId h = 0; h < ws.wall_count(); ++h) {
    Bits img(n);
    for (auto p : members_of(ws.wall(h).minus_side)) img.set(g[p]);
    auto k = ws.find_wall(img);
    if (!k) throw Error(ErrorCode::kNotWallPreserving, "permutation does not map wall " + std::to_string(h) + " to a wall");
    out.push_back({*k, ws.wall(*k).minus_side != img});
  }
  return out;
}

inline Permutation compose(const Permutation& a, const Permutation& b) {  // a after b
  Permutation c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

}  // namespace detail

// Checks that p is G-invariant and consistent in the first subdivision.
inline std::string verify_subdivision_point(const Wallspace& ws, const std::vector<Permutation>& generators,
                                            const SubdivisionPoint& p) {
  const auto P = static_cast<WallId>(ws.wall_count());
  for (std::size_t gi = 0; gi < generators.size(); ++gi) {
    auto act = detail::act_on_walls(ws, generators[gi]);
    for (WallId h = 0; h < P; ++h) {
      const WallId k = act[h].wall;
      if (p.inward.test(h) != p.inward.test(k)) return "generator " + std::to_string(gi) + " moves the inward set";
      if (p.inward.test(h)) continue;
      Side img = act[h].swaps ? opposite(p.base[h]) : p.base[h];
      if (img != p.base[k]) return "generator " + std::to_string(gi) + " moves the orientation of wall " + std::to_string(h);
    }
  }
  std::vector<WallId> base_walls, in_walls;
  for (WallId h = 0; h < P; ++h) (p.inward.test(h) ? in_walls : base_walls).push_back(h);
  for (std::size_t i = 0; i < base_walls.size(); ++i)
    for (std::size_t j = i + 1; j < base_walls.size(); ++j)
      if (ws.disjoint(base_walls[i], p.base[base_walls[i]], base_walls[j], p.base[base_walls[j]]))
        return "base orientation inconsistent at walls " + std::to_string(base_walls[i]) + "," + std::to_string(base_walls[j]);
  for (std::size_t i = 0; i < in_walls.size(); ++i)
    for (std::size_t j = i + 1; j < in_walls.size(); ++j)
      if (!ws.crosses(in_walls[i], in_walls[j])) return "inward walls do not cross";
  for (auto k : base_walls)
    for (auto h : in_walls)
      for (Side s : {Side::kMinus, Side::kPlus})
        if (ws.disjoint(k, p.base[k], h, s)) return "base halfspace misses a side of an inward wall";
  return {};
}

inline FixedPointReport fixed_point_finite_group(const DualSpace& d, const std::vector<Permutation>& generators,
                                                 std::size_t group_cap = 100'000) {
  const Wallspace& ws = *d.ws;
  const std::size_t n = ws.point_count();
  const auto P = static_cast<WallId>(ws.wall_count());
  for (const auto& g : generators) {
    if (g.size() != n) throw Error(ErrorCode::kInvalidArgument, "permutation has wrong length");
    std::vector<bool> hit(n, false);
    for (auto x : g) {
      if (x >= n || hit[x]) throw Error(ErrorCode::kInvalidArgument, "generator is not a permutation");
      hit[x] = true;
    }
    detail::act_on_walls(ws, g);
  }
  // Close under composition.
  Permutation id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<PointId>(i);
  std::set<Permutation> group{id};
  std::deque<Permutation> q{id};
  while (!q.empty()) {
    auto a = q.front();
    q.pop_front();
    for (const auto& g : generators) {
      auto c = detail::compose(g, a);
      if (group.insert(c).second) {
        if (group.size() > group_cap) throw Error(ErrorCode::kSearchCap, "group order exceeds cap " + std::to_string(group_cap));
        q.push_back(std::move(c));
      }
    }
  }
  std::vector<Permutation> elems(group.begin(), group.end());
  std::vector<std::vector<detail::WallImage>> acts;
  for (const auto& g : elems) acts.push_back(detail::act_on_walls(ws, g));

  FixedPointReport rep;
  rep.group_order = elems.size();
  // Smallest orbit, ties to the smallest point.
  for (PointId s = 0; s < n; ++s) {
    std::set<PointId> orb;
    for (const auto& g : elems) orb.insert(g[s]);
    if (rep.orbit.empty() || orb.size() < rep.orbit.size() || (orb.size() == rep.orbit.size() && *orb.begin() < rep.orbit.front()))
      rep.orbit.assign(orb.begin(), orb.end());
  }
  rep.majority = Bits(P);
  rep.invariant = Bits(P);
  rep.remainder = Bits(P);
  Orientation phi(P);
  Bits assigned(P);
  const Bits A = make_bits(n, rep.orbit);
  for (WallId h = 0; h < P; ++h) {
    auto minus = (ws.wall(h).minus_side & A).count();
    auto plus = (ws.wall(h).plus_side & A).count();
    if (minus == plus) continue;
    rep.majority.set(h);
    assigned.set(h);
    phi.set(h, plus > minus ? Side::kPlus : Side::kMinus);
  }
  for (WallId h = 0; h < P; ++h) {
    if (assigned.test(h)) continue;
    for (std::size_t gi = 0; gi < elems.size(); ++gi) {
      const auto img = acts[gi][h];
      if (img.wall == h || ws.crosses(h, img.wall)) continue;
      // The side s of h disjoint from its own translate points away.
      for (Side s : {Side::kMinus, Side::kPlus}) {
        Side gs = img.swaps ? opposite(s) : s;
        if (ws.disjoint(h, s, img.wall, gs)) {
          phi.set(h, opposite(s));
          rep.invariant.set(h);
          break;
        }
      }
      if (rep.invariant.test(h)) break;
    }
    if (rep.invariant.test(h)) assigned.set(h);
  }
  Bits inward(P);
  std::optional<WallId> pivot;
  for (WallId h = 0; h < P; ++h)
    if (!assigned.test(h)) {
      rep.remainder.set(h);
      if (!pivot) pivot = h;
    }
  if (pivot) {
    const WallId h = *pivot;
    for (WallId k = 0; k < P; ++k) {
      if (assigned.test(k) || k == h || ws.crosses(k, h)) continue;
      // Orient k toward the side containing a halfspace of h, then transport.
      Side sk = Side::kMinus;
      for (Side b : {Side::kMinus, Side::kPlus})
        for (Side a : {Side::kMinus, Side::kPlus})
          if (ws.included(h, a, k, b)) sk = b;
      for (std::size_t gi = 0; gi < elems.size(); ++gi) {
        const auto img = acts[gi][k];
        if (assigned.test(img.wall)) continue;
        phi.set(img.wall, img.swaps ? opposite(sk) : sk);
        assigned.set(img.wall);
      }
    }
    for (WallId k = 0; k < P; ++k)
      if (!assigned.test(k)) inward.set(k);
  }
  rep.point = SubdivisionPoint{phi, inward};
  rep.failure = verify_subdivision_point(ws, generators, rep.point);
  rep.verified = rep.failure.empty();
  return rep;
}

}  // namespace walldual
