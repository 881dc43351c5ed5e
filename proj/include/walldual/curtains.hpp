#pragma once

// Curtains dual to strongly contracting geodesics of a finite graph, the
// walls they induce, ball-separation, and the graded system built from
// R-chains.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "walldual/chain_system.hpp"
#include "walldual/common.hpp"
#include "walldual/metric_graph.hpp"
#include "walldual/wallspace.hpp"

namespace walldual {

// ------------------------------------------------------ strong contraction

struct ContractionReport {
  bool pass = true;
  // Witness ball B(center, radius) disjoint from alpha whose projection has
  // diameter >= D.
  VertexId center = 0;
  std::uint32_t radius = 0;
  std::uint32_t projection_diameter = 0;
};

// Exhaustive over centres off alpha. Projection diameter grows with the
// radius, so only the largest ball missing alpha is tested per centre.
inline ContractionReport is_strongly_contracting(const MetricGraph& g, const Geodesic& alpha, std::uint32_t D) {
  ContractionReport rep;
  const std::size_t n = g.size();
  std::vector<std::uint32_t> lo(n), hi(n), dist(n);
  std::vector<bool> on(n, false);
  for (auto v : alpha) on[v] = true;
  for (VertexId x = 0; x < n; ++x) {
    auto [a, b] = projection_span(g, alpha, x);
    lo[x] = a;
    hi[x] = b;
    dist[x] = g.d(x, alpha[a]);
  }
  for (VertexId x = 0; x < n; ++x) {
    if (on[x]) continue;
    const std::uint32_t r = dist[x] - 1;
    std::uint32_t mn = UINT32_MAX, mx = 0;
    for (VertexId y = 0; y < n; ++y)
      if (g.d(x, y) <= r) {
        mn = std::min(mn, lo[y]);
        mx = std::max(mx, hi[y]);
      }
    if (mx - mn >= D) {
      rep.pass = false;
      rep.center = x;
      rep.radius = r;
      rep.projection_diameter = mx - mn;
      return rep;
    }
  }
  return rep;
}

// ------------------------------------------------------------------ curtains

struct Curtain {
  Geodesic dual_geodesic;     // length 20D
  std::uint32_t D = 1;
  std::uint32_t start = 0;    // interval is dual_geodesic[start .. start+10D]
  Bits minus, membrane, plus;
  std::uint32_t thickness = 0;  // d(minus, plus)
};

struct OrientedCurtain {
  std::uint32_t id = 0;
  bool flip = false;  // swap minus and plus

  friend bool operator==(OrientedCurtain a, OrientedCurtain b) { return a.id == b.id && a.flip == b.flip; }
};

// How a curtain induces a wall: the wall side (flip ? plus : minus) equals
// the curtain's minus halfspace, thickened by the membrane unless `thin`.
struct CurtainWitness {
  std::uint32_t curtain = 0;
  bool thin = false;
  bool flip = false;
};

struct CurtainOptions {
  std::vector<std::uint32_t> D_values{1};
  std::size_t geodesic_budget = 200'000;  // geodesics examined per D
};

struct CurtainWallspace {
  std::shared_ptr<const MetricGraph> graph;
  std::vector<Curtain> curtains;
  std::shared_ptr<const Wallspace> walls;
  std::vector<std::vector<CurtainWitness>> witnesses;  // per wall
  std::size_t geodesics_examined = 0;
  std::size_t contracting_geodesics = 0;
  bool truncated = false;

  const Bits& minus(OrientedCurtain c) const { return c.flip ? curtains[c.id].plus : curtains[c.id].minus; }
  const Bits& plus(OrientedCurtain c) const { return c.flip ? curtains[c.id].minus : curtains[c.id].plus; }
  const Bits& membrane(OrientedCurtain c) const { return curtains[c.id].membrane; }

  // Curtain of witness i of wall z.wall, oriented with its minus side on z.lower.
  OrientedCurtain orient(OrientedWall z, std::uint32_t i) const {
    const auto& w = witnesses[z.wall][i];
    const Side curtain_minus_side = w.flip ? Side::kPlus : Side::kMinus;
    return {w.curtain, curtain_minus_side != z.lower};
  }

  // a < b as curtains: a's minus side and membrane lie in b's minus side.
  bool nested(OrientedCurtain a, OrientedCurtain b) const {
    if (a.id == b.id) return false;
    return (minus(a) | membrane(a)).is_subset_of(minus(b));
  }
};

namespace detail {

inline Curtain make_curtain(const MetricGraph& g, const Geodesic& alpha, std::uint32_t D, std::uint32_t start,
                            const std::vector<std::pair<std::uint32_t, std::uint32_t>>& span) {
  const std::size_t n = g.size();
  Curtain c;
  c.dual_geodesic = alpha;
  c.D = D;
  c.start = start;
  c.minus = Bits(n);
  c.membrane = Bits(n);
  c.plus = Bits(n);
  const std::uint32_t end = start + 10 * D;
  for (VertexId x = 0; x < n; ++x) {
    const bool lo = span[x].first < start, hi = span[x].second > end;
    if (lo && hi) throw Error(ErrorCode::kStructural, "vertex projects to both sides of a curtain");
    if (lo) c.minus.set(x);
    else if (hi) c.plus.set(x);
    else c.membrane.set(x);
  }
  // Canonical orientation: minus holds the smallest vertex of minus u plus.
  if (c.plus.find_first() < c.minus.find_first()) {
    std::swap(c.minus, c.plus);
    std::reverse(c.dual_geodesic.begin(), c.dual_geodesic.end());
    c.start = 20 * D - end;
  }
  c.thickness = g.set_distance(c.minus, c.plus);
  if (c.thickness < 3 * D)
    throw Error(ErrorCode::kStructural, "curtain thickness " + std::to_string(c.thickness) + " below 3D");
  return c;
}

}  // namespace detail

inline CurtainWallspace build_curtains(const MetricGraph& g, const CurtainOptions& opt = {}) {
  CurtainWallspace cw;
  cw.graph = std::make_shared<const MetricGraph>(g);
  const std::size_t n = g.size();
  std::map<std::pair<Bits, Bits>, Curtain> uniq;  // keyed by (minus, membrane)
  for (auto D : opt.D_values) {
    if (D == 0) throw Error(ErrorCode::kInvalidArgument, "D must be positive");
    const std::uint32_t len = 20 * D;
    std::size_t examined = 0;
    for (VertexId a = 0; a < n && !cw.truncated; ++a)
      for (VertexId b = a + 1; b < n && !cw.truncated; ++b) {
        if (g.d(a, b) != len) continue;
        g.for_each_geodesic(a, b, SIZE_MAX, [&](const Geodesic& alpha) {
          if (examined >= opt.geodesic_budget) {
            cw.truncated = true;
            return false;
          }
          ++examined;
          if (!is_strongly_contracting(g, alpha, D).pass) return true;
          ++cw.contracting_geodesics;
          std::vector<std::pair<std::uint32_t, std::uint32_t>> span(n);
          for (VertexId x = 0; x < n; ++x) span[x] = projection_span(g, alpha, x);
          for (std::uint32_t s = 1; s + 10 * D <= len - 1; ++s) {
            auto c = detail::make_curtain(g, alpha, D, s, span);
            auto key = std::make_pair(c.minus, c.membrane);
            uniq.emplace(std::move(key), std::move(c));
          }
          return true;
        });
      }
    cw.geodesics_examined += examined;
  }
  for (auto& [key, c] : uniq) cw.curtains.push_back(std::move(c));

  // Induced bipartitions, deduplicated; minus side holds vertex 0.
  std::vector<Bits> sides;
  std::map<Bits, WallId> index;
  std::vector<std::vector<CurtainWitness>> wit;
  for (std::uint32_t ci = 0; ci < cw.curtains.size(); ++ci) {
    const auto& c = cw.curtains[ci];
    for (bool thin : {false, true}) {
      Bits side = thin ? c.minus : (c.minus | c.membrane);
      const bool flip = !side.test(0);
      Bits canon = flip ? ~side : side;
      auto [it, fresh] = index.emplace(canon, static_cast<WallId>(sides.size()));
      if (fresh) {
        sides.push_back(canon);
        wit.emplace_back();
      }
      wit[it->second].push_back({ci, thin, flip});
    }
  }
  cw.walls = std::make_shared<const Wallspace>(g.labels(), std::move(sides));
  cw.witnesses = std::move(wit);
  return cw;
}

// ----------------------------------------------------------- ball separation

struct BallSeparation {
  bool separated = false;
  VertexId center = 0;
  std::uint32_t radius = 0;
};

// Least-radius ball search with lazily cached balls and, per ball and
// source, the targets still reachable along a geodesic once the ball is
// deleted.
class BallSearcher {
 public:
  explicit BallSearcher(const MetricGraph& g) : g_(&g) {}

  BallSeparation search(const CurtainWallspace& cw, OrientedCurtain A, OrientedCurtain B, std::uint32_t R) {
    const Bits region = cw.plus(A) & cw.minus(B);
    const Bits& from = cw.minus(A);
    const Bits& to = cw.plus(B);
    for (std::uint32_t rho = 0; rho <= R; ++rho)
      for (auto c : members_of(region)) {
        const Bits& ball = ball_of(c, rho);
        if (!ball.is_subset_of(region)) continue;
        bool ok = true;
        for (auto a : members_of(from))
          if (avoid(c, rho, a).intersects(to)) {
            ok = false;
            break;
          }
        if (ok) return {true, c, rho};
      }
    return {};
  }

 private:
  const Bits& ball_of(VertexId c, std::uint32_t rho) {
    auto key = std::make_pair(c, rho);
    auto it = balls_.find(key);
    if (it == balls_.end()) it = balls_.emplace(key, g_->ball(c, rho)).first;
    return it->second;
  }

  const Bits& avoid(VertexId c, std::uint32_t rho, VertexId a) {
    auto key = std::make_tuple(c, rho, a);
    auto it = avoid_.find(key);
    if (it != avoid_.end()) return it->second;
    const std::size_t n = g_->size();
    std::vector<std::uint32_t> d(n);
    g_->bfs(a, &ball_of(c, rho), d.data());
    Bits out(n);
    for (VertexId v = 0; v < n; ++v)
      if (d[v] == g_->d(a, v)) out.set(v);
    return avoid_.emplace(key, std::move(out)).first->second;
  }

  const MetricGraph* g_;
  std::map<std::pair<VertexId, std::uint32_t>, Bits> balls_;
  std::map<std::tuple<VertexId, std::uint32_t, VertexId>, Bits> avoid_;
};

// R-ball-separation of oriented curtains h1 < h2 (h2 on h1's plus side).
// R = 0 is allowed and means a single separating vertex.
inline BallSeparation is_ball_separated(const CurtainWallspace& cw, OrientedCurtain h1, OrientedCurtain h2, std::uint32_t R) {
  if (h1.id == h2.id || cw.membrane(h1).intersects(cw.membrane(h2)))
    throw Error(ErrorCode::kNotDisjoint,
                "curtains " + std::to_string(h1.id) + " and " + std::to_string(h2.id) + " are not disjoint");
  if (!cw.nested(h1, h2)) return {};
  BallSearcher searcher(*cw.graph);
  return searcher.search(cw, h1, h2, R);
}

// Least separating radius (up to a cap) for every nested ordered pair of
// oriented curtains.
class SeparationTable {
 public:
  static constexpr std::uint8_t kNone = 255;

  SeparationTable(const CurtainWallspace& cw, std::uint32_t radius_cap)
      : C_(cw.curtains.size()), cap_(std::min<std::uint32_t>(radius_cap, kNone - 1)) {
    BallSearcher searcher(*cw.graph);
    sep_.assign(4 * C_ * C_, kNone);
    for (std::uint32_t a = 0; a < C_; ++a)
      for (bool fa : {false, true})
        for (std::uint32_t b = 0; b < C_; ++b)
          for (bool fb : {false, true}) {
            const OrientedCurtain A{a, fa}, B{b, fb};
            if (!cw.nested(A, B)) continue;
            // (A,B) and (rev B, rev A) describe the same configuration.
            const OrientedCurtain rb{b, !fb}, ra{a, !fa};
            if (index(rb, ra) < index(A, B)) {
              sep_[index(A, B)] = sep_[index(rb, ra)];
              continue;
            }
            auto s = searcher.search(cw, A, B, cap_);
            sep_[index(A, B)] = s.separated ? static_cast<std::uint8_t>(s.radius) : kNone;
          }
  }

  std::size_t curtain_count() const { return C_; }
  std::uint32_t radius_cap() const { return cap_; }
  std::uint8_t sep(OrientedCurtain a, OrientedCurtain b) const { return sep_[index(a, b)]; }
  bool separated(OrientedCurtain a, OrientedCurtain b, std::uint32_t R) const { return sep(a, b) != kNone && sep(a, b) <= R; }

  // Distinct finite values, ascending.
  std::vector<std::uint32_t> thresholds() const {
    std::vector<std::uint32_t> t;
    for (auto v : sep_)
      if (v != kNone) t.push_back(v);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }

 private:
  std::size_t index(OrientedCurtain a, OrientedCurtain b) const {
    return (2 * a.id + a.flip) * (2 * C_) + (2 * b.id + b.flip);
  }

  std::size_t C_;
  std::uint32_t cap_;
  std::vector<std::uint8_t> sep_;
};

// ------------------------------------------------------------- R-chains

// Walls h_1 < ... < h_k form a member of C_R when some choice of inducing
// curtains is an R-chain. Consecutive separation implies separation of all
// pairs (a separating ball for (a,b) also separates (a,c) when b < c), so
// the predicate is interval-closed.
class CurtainPredicate final : public WitnessPredicate {
 public:
  CurtainPredicate(std::shared_ptr<const CurtainWallspace> cw, std::shared_ptr<const SeparationTable> table, std::uint32_t R)
      : cw_(std::move(cw)), table_(std::move(table)), R_(R) {}

  std::string name() const override { return "ball_separated:R=" + std::to_string(R_); }
  std::size_t witness_count(WallId h) const override { return cw_->witnesses[h].size(); }
  bool admissible(OrientedWall lo, std::uint32_t i, OrientedWall hi, std::uint32_t j) const override {
    const auto a = cw_->orient(lo, i), b = cw_->orient(hi, j);
    return a.id != b.id && table_->separated(a, b, R_);
  }
  bool interval_closed() const override { return true; }
  std::uint32_t R() const { return R_; }

 private:
  std::shared_ptr<const CurtainWallspace> cw_;
  std::shared_ptr<const SeparationTable> table_;
  std::uint32_t R_;
};

inline ChainSystem curtain_system(std::shared_ptr<const CurtainWallspace> cw, std::shared_ptr<const SeparationTable> table,
                                  std::uint32_t R) {
  auto cs = ChainSystem::pairwise(std::make_shared<CurtainPredicate>(std::move(cw), std::move(table), R));
  cs.declared_L = static_cast<int>(3 * R + 5);
  cs.declared_m = 3;
  return cs;
}

struct CurtainModel {
  std::shared_ptr<const CurtainWallspace> cw;
  std::shared_ptr<const SeparationTable> table;
  GradedSystem graded;
};

// Levels R = 1..R_max. Levels with the same effective threshold share one
// predicate object so per-level work can be reused.
inline CurtainModel assemble_graded(const CurtainWallspace& cw_in, std::uint32_t R_max) {
  if (R_max == 0) throw Error(ErrorCode::kInvalidArgument, "R_max must be positive");
  CurtainModel model;
  model.cw = std::make_shared<const CurtainWallspace>(cw_in);
  model.table = std::make_shared<const SeparationTable>(*model.cw, R_max);
  auto th = model.table->thresholds();
  std::vector<ChainSystem> systems;
  std::optional<ChainSystem> prev;
  std::uint32_t prev_eff = UINT32_MAX;
  for (std::uint32_t R = 1; R <= R_max; ++R) {
    std::uint32_t eff = UINT32_MAX;
    for (auto t : th)
      if (t <= R) eff = t;
    if (!prev || eff != prev_eff) {
      prev = curtain_system(model.cw, model.table, R);
      prev_eff = eff;
    }
    ChainSystem cs = *prev;
    cs.declared_L = static_cast<int>(3 * R + 5);
    systems.push_back(std::move(cs));
  }
  model.graded = make_curtain_grading(std::move(systems));
  return model;
}

// --------------------------------------------------------- crossing bound

// Curtain k is crossed by curtain h when all four quarterspaces of their
// halfspaces are nonempty.
inline bool curtains_cross(const CurtainWallspace& cw, std::uint32_t h, std::uint32_t k) {
  const auto& H = cw.curtains[h];
  const auto& K = cw.curtains[k];
  return H.minus.intersects(K.minus) && H.minus.intersects(K.plus) && H.plus.intersects(K.minus) && H.plus.intersects(K.plus);
}

struct CrossingBoundReport {
  bool pass = true;
  std::uint32_t R = 0;
  std::size_t bound = 0;            // 3R+5
  std::size_t separated_pairs = 0;  // R-ball-separated (k1,k2) examined
  std::size_t crossing_pairs = 0;   // of those, pairs crossed by some curtain
  std::size_t observed = 0;         // longest R-chain crossing both
  std::vector<OrientedCurtain> witness_pair, witness_chain;
};

// Longest R-chain of curtains inside `allowed`, by DAG longest path over
// oriented curtains.
inline std::vector<OrientedCurtain> longest_r_chain(const CurtainWallspace& cw, const SeparationTable& t,
                                                    const std::vector<std::uint32_t>& allowed, std::uint32_t R) {
  std::vector<OrientedCurtain> nodes;
  for (auto c : allowed) {
    nodes.push_back({c, false});
    nodes.push_back({c, true});
  }
  // Topological order: nested (minus u membrane) sets strictly grow.
  std::sort(nodes.begin(), nodes.end(), [&](OrientedCurtain a, OrientedCurtain b) {
    auto sa = cw.minus(a).count(), sb = cw.minus(b).count();
    return sa != sb ? sa < sb : (a.id != b.id ? a.id < b.id : a.flip < b.flip);
  });
  std::vector<std::size_t> best(nodes.size(), 1), parent(nodes.size(), SIZE_MAX);
  std::size_t arg = 0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i)
      if (best[i] + 1 > best[j] && t.separated(nodes[i], nodes[j], R)) {
        best[j] = best[i] + 1;
        parent[j] = i;
      }
    if (best[j] > best[arg]) arg = j;
  }
  std::vector<OrientedCurtain> out;
  if (nodes.empty()) return out;
  for (std::size_t v = arg; v != SIZE_MAX; v = parent[v]) out.push_back(nodes[v]);
  std::reverse(out.begin(), out.end());
  return out;
}

inline CrossingBoundReport check_crossing_bound(const CurtainWallspace& cw, const SeparationTable& t, std::uint32_t R) {
  CrossingBoundReport rep;
  rep.R = R;
  rep.bound = 3 * R + 5;
  const auto C = static_cast<std::uint32_t>(cw.curtains.size());
  for (std::uint32_t a = 0; a < C; ++a)
    for (bool fa : {false, true})
      for (std::uint32_t b = 0; b < C; ++b)
        for (bool fb : {false, true}) {
          const OrientedCurtain k1{a, fa}, k2{b, fb};
          if (!t.separated(k1, k2, R)) continue;
          ++rep.separated_pairs;
          std::vector<std::uint32_t> X;
          for (std::uint32_t h = 0; h < C; ++h)
            if (curtains_cross(cw, h, a) && curtains_cross(cw, h, b)) X.push_back(h);
          if (X.empty()) continue;
          ++rep.crossing_pairs;
          auto chain = longest_r_chain(cw, t, X, R);
          if (chain.size() > rep.observed) {
            rep.observed = chain.size();
            rep.witness_pair = {k1, k2};
            rep.witness_chain = chain;
          }
        }
  rep.pass = rep.observed <= rep.bound;
  return rep;
}

// ------------------------------------------------------ universal comparison

struct ComparisonRow {
  VertexId s = 0, t = 0;
  std::uint32_t graph_distance = 0;
  Rational graded = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  Rational max_graded = 0;           // Dist-diameter over the sampled pairs
  Rational lambda1 = 0;
  // min over rows of Dist(s,t) - lambda_1 (d(s,t)/20 - 2)
  std::optional<Rational> min_linear_margin;
  // max over sampled graph geodesics of Dist(s,v)+Dist(v,t)-Dist(s,t)
  Rational rough_slack = 0;
  std::size_t geodesics_checked = 0;
};

inline ComparisonReport universal_comparison(const MetricGraph& g, const CurtainModel& model,
                                             const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                             std::size_t geodesic_samples = 1) {
  ComparisonReport rep;
  const auto& gs = model.graded;
  const Wallspace& ws = *model.cw->walls;
  if (!gs.levels.empty()) rep.lambda1 = gs.levels.front().lambda;
  std::vector<Orientation> phi;
  for (PointId s = 0; s < g.size(); ++s) phi.push_back(principal_ultrafilter(ws, s));
  rep.rows.resize(pairs.size());
  std::vector<Rational> slack(pairs.size(), 0);
  std::vector<std::size_t> checked(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t i) {
    auto [s, t] = pairs[i];
    auto& row = rep.rows[i];
    row.s = s;
    row.t = t;
    row.graph_distance = g.d(s, t);
    row.graded = graded_dist(gs, ws, phi[s], phi[t]);
    g.for_each_geodesic(s, t, geodesic_samples, [&](const Geodesic& path) {
      for (auto v : path) {
        Rational e = graded_dist(gs, ws, phi[s], phi[v]) + graded_dist(gs, ws, phi[v], phi[t]) - row.graded;
        slack[i] = std::max(slack[i], e);
      }
      ++checked[i];
      return true;
    });
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& row = rep.rows[i];
    rep.max_graded = std::max(rep.max_graded, row.graded);
    Rational margin = row.graded - rep.lambda1 * (Rational(row.graph_distance, 20) - 2);
    if (!rep.min_linear_margin || margin < *rep.min_linear_margin) rep.min_linear_margin = margin;
    rep.rough_slack = std::max(rep.rough_slack, slack[i]);
    rep.geodesics_checked += checked[i];
  }
  return rep;
}

}  // namespace walldual
