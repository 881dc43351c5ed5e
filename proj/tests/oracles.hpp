#pragma once

// Brute-force reference implementations used as test oracles. They work
// straight from point bitsets and definitions, never through the library's
// relation tables or search routines.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "walldual/walldual.hpp"

namespace oracle {

using namespace walldual;

inline Bits side(const Wallspace& ws, WallId h, Side s) { return s == Side::kMinus ? ws.wall(h).minus_side : ws.wall(h).plus_side; }

// Halfspaces chosen by o pairwise intersect.
inline bool consistent(const Wallspace& ws, const Orientation& o) {
  for (WallId h = 0; h < ws.wall_count(); ++h)
    for (WallId k = 0; k < ws.wall_count(); ++k)
      if (h != k && !side(ws, h, o[h]).intersects(side(ws, k, o[k]))) return false;
  return true;
}

inline std::vector<Orientation> ultrafilters(const Wallspace& ws) {
  const std::size_t P = ws.wall_count();
  std::vector<Orientation> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << P); ++mask) {
    Orientation o(P);
    for (WallId h = 0; h < P; ++h)
      if (mask >> h & 1) o.set(h, Side::kPlus);
    if (consistent(ws, o)) out.push_back(o);
  }
  return out;
}

// Two walls are nested (comparable) iff some quarterspace is empty.
inline bool comparable(const Wallspace& ws, WallId h, WallId k) {
  for (Side a : {Side::kMinus, Side::kPlus})
    for (Side b : {Side::kMinus, Side::kPlus})
      if (!side(ws, h, a).intersects(side(ws, k, b))) return true;
  return false;
}

inline bool crosses(const Wallspace& ws, WallId h, WallId k) { return h != k && !comparable(ws, h, k); }

// Some choice of sides is totally ordered by inclusion.
inline bool nested_chain(const Wallspace& ws, const std::vector<WallId>& c) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c.size()); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < c.size() && ok; ++i)
      for (std::size_t j = i + 1; j < c.size() && ok; ++j) {
        const Bits a = side(ws, c[i], (mask >> i & 1) ? Side::kPlus : Side::kMinus);
        const Bits b = side(ws, c[j], (mask >> j & 1) ? Side::kPlus : Side::kMinus);
        ok = a.is_subset_of(b) || b.is_subset_of(a);
      }
    if (ok) return true;
  }
  return false;
}

// Walls of c oriented with lower side holding x, sorted by lower size.
inline std::vector<OrientedWall> orient_toward(const Wallspace& ws, const std::vector<WallId>& c, const Orientation& x) {
  std::vector<OrientedWall> out;
  for (auto h : c) out.push_back({h, x[h]});
  std::sort(out.begin(), out.end(), [&](OrientedWall a, OrientedWall b) {
    return side(ws, a.wall, a.lower).count() < side(ws, b.wall, b.lower).count();
  });
  return out;
}

// Membership straight from the definitions; predicates are required on
// every pair, with some witness choice.
inline bool member(const ChainSystem& cs, const Wallspace& ws, const std::vector<WallId>& c, const Orientation& x) {
  switch (cs.kind()) {
    case SystemKind::kAllSubsets: return true;
    case SystemKind::kExplicit:
      for (const auto& m : cs.members()) {
        bool all = true;
        for (auto h : c) all = all && m.test(h);
        if (all) return true;
      }
      return false;
    case SystemKind::kAllChains:
    case SystemKind::kPairwise: {
      if (!nested_chain(ws, c)) return false;
      auto z = orient_toward(ws, c, x);
      const auto& pred = *cs.predicate();
      std::vector<std::uint32_t> pick(z.size());
      std::function<bool(std::size_t)> go = [&](std::size_t t) {
        if (t == z.size()) return true;
        for (std::uint32_t j = 0; j < pred.witness_count(z[t].wall); ++j) {
          bool ok = true;
          for (std::size_t s = 0; s < t && ok; ++s) ok = pred.admissible(z[s], pick[s], z[t], j);
          if (!ok) continue;
          pick[t] = j;
          if (go(t + 1)) return true;
        }
        return false;
      };
      return go(0);
    }
  }
  return false;
}

// Largest member of C made of walls separating x and y, over all subsets.
inline std::size_t dist(const ChainSystem& cs, const Wallspace& ws, const Orientation& x, const Orientation& y) {
  std::vector<WallId> sep;
  for (WallId h = 0; h < ws.wall_count(); ++h)
    if (x[h] != y[h]) sep.push_back(h);
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sep.size()); ++mask) {
    std::vector<WallId> c;
    for (std::size_t i = 0; i < sep.size(); ++i)
      if (mask >> i & 1) c.push_back(sep[i]);
    if (c.size() > best && member(cs, ws, c, x)) best = c.size();
  }
  return best;
}

inline std::vector<std::uint32_t> bfs_metric(std::size_t n, const std::vector<std::vector<std::uint32_t>>& adj) {
  std::vector<std::uint32_t> d(n * n, UINT32_MAX);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> q{s};
    d[s * n + s] = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (auto v : adj[q[i]])
        if (d[s * n + v] == UINT32_MAX) {
          d[s * n + v] = d[s * n + q[i]] + 1;
          q.push_back(v);
        }
  }
  return d;
}

// Max over quadruples of (largest - second largest) of the three pair sums.
inline Rational four_point(std::size_t n, const std::vector<std::uint32_t>& d) {
  Rational best = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e) {
          long s[3] = {static_cast<long>(d[a * n + b] + d[c * n + e]), static_cast<long>(d[a * n + c] + d[b * n + e]),
                       static_cast<long>(d[a * n + e] + d[b * n + c])};
          std::sort(s, s + 3);
          best = std::max(best, Rational(s[2] - s[1]));
        }
  return best;
}

// Helly property for families of up to `cap` integer balls.
inline bool helly(std::size_t n, const std::vector<std::uint32_t>& d, std::size_t cap) {
  std::uint32_t diam = *std::max_element(d.begin(), d.end());
  std::vector<std::pair<std::size_t, std::uint32_t>> balls;
  for (std::size_t c = 0; c < n; ++c)
    for (std::uint32_t r = 0; r <= diam; ++r) balls.emplace_back(c, r);
  std::vector<std::size_t> fam;
  std::function<bool(std::size_t)> go = [&](std::size_t from) {
    if (fam.size() >= 2) {
      bool common = false;
      for (std::size_t v = 0; v < n && !common; ++v) {
        bool in = true;
        for (auto b : fam) in = in && d[balls[b].first * n + v] <= balls[b].second;
        common = in;
      }
      if (!common) return false;
    }
    if (fam.size() == cap) return true;
    for (std::size_t b = from; b < balls.size(); ++b) {
      bool pairwise = true;
      for (auto a : fam) pairwise = pairwise && d[balls[a].first * n + balls[b].first] <= balls[a].second + balls[b].second;
      if (!pairwise) continue;
      fam.push_back(b);
      bool ok = go(b + 1);
      fam.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return go(0);
}

// Normal cube path: from v, flip every separating wall that can be flipped
// on its own, i.e. every separating hyperplane adjacent to v.
inline std::vector<Orientation> normal_cube_path(const Wallspace& ws, const Orientation& x, const Orientation& y) {
  std::vector<Orientation> path{x};
  Orientation v = x;
  while (v != y) {
    Orientation next = v;
    for (WallId h = 0; h < ws.wall_count(); ++h) {
      if (v[h] == y[h]) continue;
      Orientation t = v;
      t.flip(h);
      if (consistent(ws, t)) next.flip(h);
    }
    if (next == v) break;
    v = next;
    path.push_back(v);
  }
  return path;
}

// Every geodesic from a to b meets `ball`.
inline bool all_geodesics_hit(const MetricGraph& g, VertexId a, VertexId b, const Bits& ball) {
  bool all = true;
  g.for_each_geodesic(a, b, SIZE_MAX, [&](const Geodesic& p) {
    bool hit = false;
    for (auto v : p) hit = hit || ball.test(v);
    all = all && hit;
    return all;
  });
  return all;
}

// Least radius of a ball inside plus(A) & minus(B) that every geodesic from
// minus(A) to plus(B) meets.
inline std::optional<std::uint32_t> separation_radius(const CurtainWallspace& cw, OrientedCurtain A, OrientedCurtain B,
                                                      std::uint32_t cap) {
  const MetricGraph& g = *cw.graph;
  const Bits region = cw.plus(A) & cw.minus(B);
  for (std::uint32_t r = 0; r <= cap; ++r)
    for (VertexId c = 0; c < g.size(); ++c) {
      if (!region.test(c)) continue;
      Bits ball(g.size());
      for (VertexId v = 0; v < g.size(); ++v)
        if (g.d(c, v) <= r) ball.set(v);
      if (!ball.is_subset_of(region)) continue;
      bool ok = true;
      for (auto a : members_of(cw.minus(A)))
        for (auto b : members_of(cw.plus(B)))
          if (ok && !all_geodesics_hit(g, a, b, ball)) ok = false;
      if (ok) return r;
    }
  return std::nullopt;
}

// Strong contraction: every ball disjoint from alpha projects to a set of
// diameter < D, over all centres and radii.
inline bool strongly_contracting(const MetricGraph& g, const Geodesic& alpha, std::uint32_t D) {
  std::vector<bool> on(g.size(), false);
  for (auto v : alpha) on[v] = true;
  for (VertexId c = 0; c < g.size(); ++c)
    for (std::uint32_t r = 0; r <= g.diameter(); ++r) {
      bool disjoint = true;
      for (auto v : alpha) disjoint = disjoint && g.d(c, v) > r;
      if (!disjoint) break;
      std::uint32_t lo = UINT32_MAX, hi = 0;
      for (VertexId y = 0; y < g.size(); ++y) {
        if (g.d(c, y) > r) continue;
        std::uint32_t best = UINT32_MAX;
        for (auto v : alpha) best = std::min(best, g.d(y, v));
        for (std::uint32_t i = 0; i < alpha.size(); ++i)
          if (g.d(y, alpha[i]) == best) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
          }
      }
      if (hi - lo >= D) return false;
    }
  return true;
}

}  // namespace oracle
