#pragma once

// Quantitative checks: four-point defect, cross chains, coarse injectivity,
// coarse density and the graded hyperbolicity bounds.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "walldual/chain_system.hpp"
#include "walldual/dual_space.hpp"
#include "walldual/paths.hpp"

namespace walldual {

// --------------------------------------------------------- four-point defect

struct HyperbolicityReport {
  bool pass = true;
  Rational delta = 0;
  Rational bound = 0;
  std::size_t quadruple_count = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  Quadruple worst_quadruple{};
};

inline std::uint64_t choose4(std::uint64_t n) { return n < 4 ? 0 : n * (n - 1) / 2 * (n - 2) / 3 * (n - 3) / 4; }

namespace detail {

template <typename T>
struct FourPointResult {
  T delta{};
  std::size_t count = 0;
  bool exhaustive = true;
  Quadruple worst{};
};

template <typename T>
inline T quad_defect(const std::vector<T>& t, std::size_t n, std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
  T s1 = t[a * n + b] + t[c * n + e];
  T s2 = t[a * n + c] + t[b * n + e];
  T s3 = t[a * n + e] + t[b * n + c];
  if (s1 < s2) std::swap(s1, s2);
  if (s2 < s3) std::swap(s2, s3);
  if (s1 < s2) std::swap(s1, s2);
  return s1 - s2;  // largest minus second largest
}

// Quadruples are exhaustive below 40 points or when C(n,4) fits the cap,
// otherwise `cap` uniform samples.
template <typename T>
inline FourPointResult<T> four_point_table(std::size_t n, const std::vector<T>& t, std::uint64_t cap, std::uint64_t seed) {
  FourPointResult<T> res;
  if (n < 4) return res;
  if (n < 40 || choose4(n) <= cap) {
    std::vector<T> best(n, T{});
    std::vector<Quadruple> arg(n);
    parallel_for(n, [&](std::size_t a) {
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c)
          for (std::size_t e = c + 1; e < n; ++e) {
            T v = quad_defect(t, n, a, b, c, e);
            if (best[a] < v) {
              best[a] = v;
              arg[a] = {static_cast<VertexId>(a), static_cast<VertexId>(b), static_cast<VertexId>(c), static_cast<VertexId>(e)};
            }
          }
    });
    for (std::size_t a = 0; a < n; ++a)
      if (res.delta < best[a]) {
        res.delta = best[a];
        res.worst = arg[a];
      }
    res.count = choose4(n);
    return res;
  }
  res.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::uint64_t i = 0; i < cap; ++i) {
    std::size_t a = pick(rng), b = pick(rng), c = pick(rng), e = pick(rng);
    T v = quad_defect(t, n, a, b, c, e);
    if (res.delta < v) {
      res.delta = v;
      res.worst = {static_cast<VertexId>(a), static_cast<VertexId>(b), static_cast<VertexId>(c), static_cast<VertexId>(e)};
    }
  }
  res.count = cap;
  return res;
}

}  // namespace detail

// Four-point defect of an integer distance table (row-major n x n). `bound`
// is only compared, never assumed.
inline HyperbolicityReport four_point_delta(std::size_t n, const Metric& metric, std::uint64_t quadruple_cap = 20'000'000,
                                            std::uint64_t seed = 1, std::optional<Rational> bound = std::nullopt) {
  std::vector<std::int64_t> t(metric.begin(), metric.end());
  auto r = detail::four_point_table(n, t, quadruple_cap, seed);
  HyperbolicityReport rep;
  rep.delta = Rational(r.delta);
  rep.quadruple_count = r.count;
  rep.exhaustive = r.exhaustive;
  rep.seed = seed;
  rep.worst_quadruple = r.worst;
  if (bound) {
    rep.bound = *bound;
    rep.pass = rep.delta <= *bound;
  }
  return rep;
}

inline HyperbolicityReport four_point_delta(const DualSpace& d, std::uint64_t quadruple_cap = 20'000'000,
                                            std::uint64_t seed = 1, std::optional<Rational> bound = std::nullopt) {
  return four_point_delta(d.size(), d.metric, quadruple_cap, seed, bound);
}

// Bound for an L-separated m-gluable system.
inline Rational four_point_bound(std::size_t L, int m) { return Rational(22 * (static_cast<long long>(L) + m + 1)); }

// -------------------------------------------------------------- cross chains

struct CrossChain {
  std::array<std::vector<WallId>, 4> parts;
  std::array<Orientation, 4> witnesses;

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& p : parts) s += p.size();
    return s;
  }
};

// Walls separating x_i from the other three.
inline std::array<Bits, 4> corner_walls(const std::array<Orientation, 4>& x) {
  std::array<Bits, 4> out;
  for (int i = 0; i < 4; ++i) {
    Bits b = ~Bits(x[i].bits().size());
    for (int j = 0; j < 4; ++j)
      if (j != i) b &= x[i].bits() ^ x[j].bits();
    out[i] = b;
  }
  return out;
}

inline bool is_cross_chain(const ChainSystem& cs, const Wallspace& ws, const CrossChain& chi) {
  auto corners = corner_walls(chi.witnesses);
  for (int i = 0; i < 4; ++i)
    for (auto h : chi.parts[i])
      if (!corners[i].test(h)) return false;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      std::vector<WallId> u = chi.parts[i];
      if (j != i) u.insert(u.end(), chi.parts[j].begin(), chi.parts[j].end());
      if (!contains(cs, ws, u)) return false;
    }
  return true;
}

// Maximum-cardinality cross chain by branch and bound.
inline CrossChain maximal_cross_chain(const ChainSystem& cs, const Wallspace& ws, const std::array<Orientation, 4>& x,
                                      std::size_t node_budget = 5'000'000) {
  auto corners = corner_walls(x);
  std::vector<std::pair<WallId, int>> cand;
  for (int i = 0; i < 4; ++i)
    for (auto h : members_of(corners[i])) cand.emplace_back(h, i);
  CrossChain best;
  best.witnesses = x;
  CrossChain cur;
  cur.witnesses = x;
  std::size_t nodes = 0, cur_size = 0, best_size = 0;
  auto fits = [&](WallId h, int i) {
    for (int j = 0; j < 4; ++j) {
      std::vector<WallId> u = cur.parts[i];
      if (j != i) u.insert(u.end(), cur.parts[j].begin(), cur.parts[j].end());
      u.push_back(h);
      if (!contains(cs, ws, u)) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (++nodes > node_budget) throw Error(ErrorCode::kSearchCap, "cross chain search exceeded " + std::to_string(node_budget) + " nodes");
    if (cur_size + (cand.size() - idx) <= best_size) return;
    if (idx == cand.size()) {
      best = cur;
      best_size = cur_size;
      return;
    }
    auto [h, i] = cand[idx];
    if (fits(h, i)) {
      cur.parts[i].push_back(h);
      ++cur_size;
      self(self, idx + 1);
      cur.parts[i].pop_back();
      --cur_size;
    }
    self(self, idx + 1);
  };
  rec(rec, 0);
  return best;
}

struct CrossVsLReport {
  bool pass = true;
  std::size_t r = 0;                 // walls of the realising chain not separating x3 from x4
  std::size_t chi12 = 0;             // |chi_1| + |chi_2|
  long lower = 0, upper = 0;         // chi12 - 2(L+m+1), chi12 + 4(L+m+1)
};

// Sandwich bound between a maximal cross chain and a chain realising
// dist_C(x1,x2).
inline CrossVsLReport cross_vs_L(const ChainSystem& cs, const Wallspace& ws, const CrossChain& chi, std::size_t L, int m) {
  CrossVsLReport rep;
  const auto& x = chi.witnesses;
  auto c = realizing_chain(cs, ws, x[0], x[1]);
  for (auto z : c.walls)
    if (x[2][z.wall] == x[3][z.wall]) ++rep.r;
  rep.chi12 = chi.parts[0].size() + chi.parts[1].size();
  const long k = static_cast<long>(L) + m + 1;
  rep.lower = static_cast<long>(rep.chi12) - 2 * k;
  rep.upper = static_cast<long>(rep.chi12) + 4 * k;
  rep.pass = rep.lower <= static_cast<long>(rep.r) && static_cast<long>(rep.r) <= rep.upper;
  return rep;
}

// --------------------------------------------------------- coarse injectivity

struct InjectivityReport {
  bool pass = true;
  int m = 0;
  bool integer_radii = false;  // Helly mode (m = 0)
  std::size_t family_cap = 0;
  std::size_t families = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  Rational observed_slack = 0;  // least slack that worked for the worst family
  Rational bound = 0;           // 2m
  std::vector<Ball> worst;      // radii doubled when !integer_radii
};

// For every family of at most family_cap balls with d(x_i,x_j) <= r_i + r_j
// the balls B(x_i, r_i + 2m) must share a point. Radii enter only through
// their floors and the pairwise sums, so half-integers suffice; only
// pointwise-minimal radius vectors are tested since enlarging radii helps.
// With m = 0 the statement is about integer radii (Helly graphs).
inline InjectivityReport check_coarse_injectivity(const DualSpace& d, int m, std::size_t family_cap = 4,
                                                  std::uint64_t work_cap = 200'000'000, std::size_t samples = 200'000,
                                                  std::uint64_t seed = 1) {
  InjectivityReport rep;
  rep.m = m;
  rep.family_cap = family_cap;
  rep.seed = seed;
  rep.integer_radii = (m == 0);
  rep.bound = 2 * m;
  const std::size_t n = d.size();
  if (n == 0 || family_cap < 2) return rep;
  const std::uint32_t diam = d.diameter();
  const std::uint32_t step = rep.integer_radii ? 2 : 1;  // doubled units
  const std::uint32_t rmax = diam + 2 * static_cast<std::uint32_t>(m) + 2;
  std::vector<std::vector<Bits>> balls(n, std::vector<Bits>(rmax + 1, Bits(n)));
  parallel_for(n, [&](std::size_t v) {
    for (std::size_t z = 0; z < n; ++z)
      for (std::uint32_t r = d.dist(v, z); r <= rmax; ++r) balls[v][r].set(z);
  });
  auto ball = [&](VertexId v, std::uint32_t doubled) -> const Bits& { return balls[v][std::min(doubled / 2, rmax)]; };

  // Least t (doubled, multiple of step) with a common point in B(x_i, (rho_i + t)/2).
  auto least_slack = [&](const std::vector<VertexId>& c, const std::vector<std::uint32_t>& rho) {
    for (std::uint32_t t = 0;; t += step) {
      Bits k = ball(c[0], rho[0] + t);
      for (std::size_t i = 1; i < c.size() && k.any(); ++i) k &= ball(c[i], rho[i] + t);
      if (k.any()) return t;
    }
  };
  struct Worst {
    std::uint32_t t = 0;
    std::vector<VertexId> c;
    std::vector<std::uint32_t> rho;
    std::size_t families = 0;
  };

  // All minimal radius vectors for centres c.
  auto sweep = [&](const std::vector<VertexId>& c, Worst& w) {
    const std::size_t k = c.size();
    std::vector<std::uint32_t> rho(k, 0);
    auto need = [&](std::size_t i) {
      long lo = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) lo = std::max(lo, 2L * d.dist(c[i], c[j]) - static_cast<long>(rho[j]));
      if (step == 2 && lo % 2) ++lo;
      return static_cast<std::uint32_t>(lo);
    };
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i + 1 == k) {
        rho[i] = need(i);
        for (std::size_t j = 0; j < k; ++j)
          if (rho[j] != need(j)) return;  // not minimal
        ++w.families;
        auto t = least_slack(c, rho);
        if (t > w.t || w.c.empty()) {
          w.t = t;
          w.c = c;
          w.rho = rho;
        }
        return;
      }
      for (std::uint32_t r = 0; r <= 2 * diam; r += step) {
        rho[i] = r;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  };

  const std::uint64_t radii = 2 * diam / step + 1;
  // sum over k of C(n,k) * radii^(k-1)
  double work = 0, combos = 1, rp = 1;
  for (std::size_t k = 1; k <= family_cap && k <= n; ++k) {
    combos = combos * static_cast<double>(n - k + 1) / static_cast<double>(k);
    if (k >= 2) {
      rp *= static_cast<double>(radii);
      work += combos * rp;
    }
  }
  std::vector<Worst> per(n);
  if (work <= static_cast<double>(work_cap)) {
    parallel_for(n, [&](std::size_t a) {
      std::vector<VertexId> c{static_cast<VertexId>(a)};
      auto rec = [&](auto&& self, std::size_t from) -> void {
        if (c.size() >= 2) sweep(c, per[a]);
        if (c.size() == family_cap) return;
        for (std::size_t b = from; b < n; ++b) {
          c.push_back(static_cast<VertexId>(b));
          self(self, b + 1);
          c.pop_back();
        }
      };
      rec(rec, a + 1);
    });
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1), size(2, family_cap);
    std::vector<std::vector<VertexId>> fams(samples);
    for (auto& c : fams) {
      std::size_t k = size(rng);
      std::set<VertexId> s;
      while (s.size() < std::min(k, n)) s.insert(static_cast<VertexId>(pick(rng)));
      c.assign(s.begin(), s.end());
    }
    per.assign(samples, Worst{});
    parallel_for(samples, [&](std::size_t i) { sweep(fams[i], per[i]); });
  }
  Worst w;
  for (const auto& p : per) {
    w.families += p.families;
    if (!p.c.empty() && (w.c.empty() || p.t > w.t)) {
      w.t = p.t;
      w.c = p.c;
      w.rho = p.rho;
    }
  }
  rep.families = w.families;
  rep.observed_slack = Rational(w.t, 2);
  for (std::size_t i = 0; i < w.c.size(); ++i)
    rep.worst.push_back({w.c[i], rep.integer_radii ? w.rho[i] / 2 : w.rho[i]});
  rep.pass = rep.observed_slack <= rep.bound;
  return rep;
}

// ------------------------------------------------------------ coarse density

struct DensityReport {
  bool pass = true;
  std::size_t observed = 0;  // max distance from a vertex to the image of S
  std::size_t k = 0;         // measured weak-rough-geodesic constant of S
  std::size_t bound = 0;     // 3k + 4(L+m+1)
  VertexId farthest = 0;
};

// Least k such that (S, dist_C) is k-weakly roughly geodesic, with the
// sequences drawn from S itself.
inline std::size_t weak_rough_constant(const DualSpace& d, const std::vector<VertexId>& S) {
  std::vector<std::size_t> per(S.size(), 0);
  parallel_for(S.size(), [&](std::size_t i) {
    const VertexId s = S[i];
    for (VertexId t : S) {
      const long n = d.dist(s, t);
      for (long r = 0; r <= n; ++r) {
        std::size_t best = SIZE_MAX;
        for (VertexId z : S) {
          const long a = std::labs(static_cast<long>(d.dist(s, z)) - r);
          const long b = std::labs(static_cast<long>(d.dist(z, t)) - (n - r));
          best = std::min<std::size_t>(best, static_cast<std::size_t>(std::max(a, b)));
        }
        per[i] = std::max(per[i], best);
      }
    }
  });
  return per.empty() ? 0 : *std::max_element(per.begin(), per.end());
}

inline DensityReport check_coarse_density(const DualSpace& d, const std::vector<VertexId>& S, std::size_t L, int m) {
  if (S.empty()) throw Error(ErrorCode::kInvalidArgument, "image of S is empty");
  DensityReport rep;
  for (VertexId v = 0; v < d.size(); ++v) {
    std::size_t best = SIZE_MAX;
    for (auto s : S) best = std::min<std::size_t>(best, d.dist(v, s));
    if (best > rep.observed) {
      rep.observed = best;
      rep.farthest = v;
    }
  }
  rep.k = weak_rough_constant(d, S);
  rep.bound = 3 * rep.k + 4 * (L + static_cast<std::size_t>(m) + 1);
  rep.pass = rep.observed <= rep.bound;
  return rep;
}

// -------------------------------------------------------- graded hyperbolicity

struct GradedHyperbolicityReport : HyperbolicityReport {
  std::size_t distinct_levels = 0;   // level tables after merging equal ones
  Rational max_step = 0;             // max Dist(z_r, z_{r+1}) along witness paths
  Rational step_bound = 0;           // 4 M Lambda
  Rational max_triangle_excess = 0;  // max Dist(x,z_r)+Dist(z_r,y)-Dist(x,y)
  std::size_t wrg_pairs = 0;
  bool wrg_pass = true;
};

namespace detail {

// Level distance tables over `pts`, one per level.
inline std::vector<std::vector<std::uint32_t>> level_tables(const GradedSystem& gs, const Wallspace& ws,
                                                            const std::vector<Orientation>& pts) {
  const std::size_t n = pts.size(), L = gs.levels.size();
  std::vector<std::vector<std::uint32_t>> t(L, std::vector<std::uint32_t>(n * n, 0));
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t l = 0; l < L; ++l) {
        auto v = l > 0 && same_system(gs.levels[l].system, gs.levels[l - 1].system)
                     ? t[l - 1][a * n + b]
                     : static_cast<std::uint32_t>(dist_C(gs.levels[l].system, ws, pts[a], pts[b]));
        t[l][a * n + b] = v;
        t[l][b * n + a] = v;
      }
  });
  return t;
}

}  // namespace detail

// Dist table over pts, as exact rationals.
inline std::vector<Rational> graded_table(const GradedSystem& gs, const Wallspace& ws, const std::vector<Orientation>& pts) {
  auto t = detail::level_tables(gs, ws, pts);
  const std::size_t n = pts.size();
  std::vector<Rational> out(n * n, 0);
  for (std::size_t l = 0; l < t.size(); ++l) {
    Rational w = gs.levels[l].lambda + (l + 1 == t.size() ? gs.tail_weight : Rational(0));
    for (std::size_t i = 0; i < n * n; ++i)
      if (t[l][i]) out[i] += w * t[l][i];
  }
  return out;
}

inline GradedHyperbolicityReport check_graded_hyperbolicity(const GradedSystem& gs, const Wallspace& ws,
                                                            const std::vector<Orientation>& sample,
                                                            std::uint64_t quadruple_cap = 20'000'000, std::uint64_t seed = 1,
                                                            std::size_t wrg_pairs = 200) {
  GradedHyperbolicityReport rep;
  rep.seed = seed;
  rep.bound = 16 * gs.Lambda;
  const std::size_t n = sample.size();
  auto tables = detail::level_tables(gs, ws, sample);

  // Merge equal level tables; their weights add.
  std::vector<std::vector<std::uint32_t>> uniq;
  std::vector<Rational> weight;
  for (std::size_t l = 0; l < tables.size(); ++l) {
    Rational w = gs.levels[l].lambda + (l + 1 == tables.size() ? gs.tail_weight : Rational(0));
    auto it = std::find(uniq.begin(), uniq.end(), tables[l]);
    if (it == uniq.end()) {
      uniq.push_back(tables[l]);
      weight.push_back(w);
    } else {
      weight[static_cast<std::size_t>(it - uniq.begin())] += w;
    }
  }
  rep.distinct_levels = uniq.size();

  // Scale to a common denominator; integers when it fits in 63 bits.
  BigInt den = 1;
  for (const auto& w : weight) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(w));
  std::vector<BigInt> iw;
  BigInt maxsum = 0;
  for (std::size_t g = 0; g < weight.size(); ++g) {
    iw.push_back(boost::multiprecision::numerator(weight[g]) * (den / boost::multiprecision::denominator(weight[g])));
    std::uint32_t tmax = uniq[g].empty() ? 0 : *std::max_element(uniq[g].begin(), uniq[g].end());
    maxsum += iw.back() * tmax;
  }
  if (maxsum * 4 < (BigInt(1) << 62)) {
    std::vector<std::int64_t> wi;
    for (auto& w : iw) wi.push_back(static_cast<std::int64_t>(w));
    std::vector<std::int64_t> t(n * n, 0);
    for (std::size_t g = 0; g < uniq.size(); ++g)
      for (std::size_t i = 0; i < n * n; ++i) t[i] += wi[g] * uniq[g][i];
    auto r = detail::four_point_table(n, t, quadruple_cap, seed);
    rep.delta = Rational(BigInt(r.delta), den);
    rep.quadruple_count = r.count;
    rep.exhaustive = r.exhaustive;
    rep.worst_quadruple = r.worst;
  } else {
    std::vector<Rational> t(n * n, 0);
    for (std::size_t g = 0; g < uniq.size(); ++g)
      for (std::size_t i = 0; i < n * n; ++i)
        if (uniq[g][i]) t[i] += weight[g] * uniq[g][i];
    auto r = detail::four_point_table(n, t, quadruple_cap, seed);
    rep.delta = r.delta;
    rep.quadruple_count = r.count;
    rep.exhaustive = r.exhaustive;
    rep.worst_quadruple = r.worst;
  }
  rep.pass = rep.delta <= rep.bound;

  // Weak rough geodesicity along normal wall paths of a single level R0,
  // where R0 is the least level whose remaining weighted mass is <= Lambda.
  // Any upper bound on the m_R works; the step estimate needs M >= 1.
  int M = 1;
  for (const auto& lv : gs.levels) M = std::max(M, lv.m);
  rep.step_bound = 4 * M * gs.Lambda;
  if (n >= 2 && !gs.levels.empty()) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (n * n <= wrg_pairs) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b) pairs.emplace_back(a, b);
    } else {
      while (pairs.size() < wrg_pairs) {
        auto a = pick(rng), b = pick(rng);
        if (a != b) pairs.emplace_back(a, b);
      }
    }
    std::vector<DualSpace> shells(gs.levels.size());
    for (std::size_t l = 0; l < gs.levels.size(); ++l) {
      shells[l].ws = std::make_shared<const Wallspace>(ws);
      shells[l].system = gs.levels[l].system;
    }
    std::vector<Rational> step(pairs.size(), 0), excess(pairs.size(), 0);
    parallel_for(pairs.size(), [&](std::size_t i) {
      const auto& x = sample[pairs[i].first];
      const auto& y = sample[pairs[i].second];
      auto lv = level_dists(gs, ws, x, y);
      std::size_t R0 = gs.levels.size() - 1;
      for (std::size_t l = 0; l < gs.levels.size(); ++l) {
        Rational rest = gs.tail_weight * static_cast<long long>(lv.back());
        for (std::size_t k = l + 1; k < gs.levels.size(); ++k) rest += gs.levels[k].lambda * static_cast<long long>(lv[k]);
        if (rest <= gs.Lambda) {
          R0 = l;
          break;
        }
      }
      auto p = normal_wall_path(shells[R0], x, y);
      const Rational dxy = graded_from_levels(gs, lv);
      for (std::size_t r = 0; r < p.steps.size(); ++r) {
        Rational e = graded_dist(gs, ws, x, p.steps[r]) + graded_dist(gs, ws, p.steps[r], y) - dxy;
        excess[i] = std::max(excess[i], e);
        if (r + 1 < p.steps.size()) step[i] = std::max(step[i], graded_dist(gs, ws, p.steps[r], p.steps[r + 1]));
      }
    });
    rep.wrg_pairs = pairs.size();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      rep.max_step = std::max(rep.max_step, step[i]);
      rep.max_triangle_excess = std::max(rep.max_triangle_excess, excess[i]);
    }
    rep.wrg_pass = rep.max_step <= rep.step_bound && rep.max_triangle_excess <= gs.Lambda;
  }
  return rep;
}

}  // namespace walldual
