#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace walldual;
using support::small_fixtures;

namespace {

int certified_m(const ChainSystem& cs, const Wallspace& ws) {
  int m = 0;
  while (m <= 4 && !check_gluable(cs, ws, m).pass) ++m;
  return m;
}

// Largest member crossing both walls of a 2-element member, from the oracle.
std::size_t brute_L(const ChainSystem& cs, const Wallspace& ws) {
  const std::size_t P = ws.wall_count();
  std::size_t best = 0;
  Orientation x(P);
  for (WallId h1 = 0; h1 < P; ++h1)
    for (WallId h2 = h1 + 1; h2 < P; ++h2) {
      auto pair_order = chain_order(ws, {h1, h2});
      if (!pair_order) continue;
      for (auto z : *pair_order) x.set(z.wall, z.lower);
      if (!oracle::member(cs, ws, {h1, h2}, x)) continue;
      std::vector<WallId> X;
      for (WallId h = 0; h < P; ++h)
        if (oracle::crosses(ws, h, h1) && oracle::crosses(ws, h, h2)) X.push_back(h);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << X.size()); ++mask) {
        std::vector<WallId> c;
        for (std::size_t i = 0; i < X.size(); ++i)
          if (mask >> i & 1) c.push_back(X[i]);
        if (c.size() <= best) continue;
        // Orient toward the lower end of some chain order.
        auto order = chain_order(ws, c);
        if (!order) continue;
        for (auto z : *order) x.set(z.wall, z.lower);
        if (oracle::member(cs, ws, c, x)) best = c.size();
      }
    }
  return best;
}

// Largest slack needed over all families of up to three balls, radii in
// half-units (integer radii only when m = 0).
Rational brute_injectivity(const DualSpace& d, bool integer_radii) {
  const std::size_t n = d.size();
  const std::uint32_t diam = d.diameter(), step = integer_radii ? 2 : 1;
  std::uint32_t worst = 0;
  auto in = [&](VertexId c, std::uint32_t doubled, VertexId v) { return 2 * d.dist(c, v) <= doubled; };
  auto slack = [&](const std::vector<VertexId>& c, const std::vector<std::uint32_t>& rho) {
    for (std::uint32_t t = 0;; t += step)
      for (VertexId v = 0; v < n; ++v) {
        bool all = true;
        for (std::size_t i = 0; i < c.size(); ++i) all = all && in(c[i], rho[i] + t, v);
        if (all) return t;
      }
  };
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      for (std::uint32_t ra = 0; ra <= 2 * diam; ra += step)
        for (std::uint32_t rb = 0; rb <= 2 * diam; rb += step) {
          if (2 * d.dist(a, b) > ra + rb) continue;
          worst = std::max(worst, slack({a, b}, {ra, rb}));
          for (VertexId c = b + 1; c < n; ++c)
            for (std::uint32_t rc = 0; rc <= 2 * diam; rc += step)
              if (2 * d.dist(a, c) <= ra + rc && 2 * d.dist(b, c) <= rb + rc)
                worst = std::max(worst, slack({a, b, c}, {ra, rb, rc}));
        }
  return Rational(worst, 2);
}

}  // namespace

TEST(Geometry, FourPointMatchesBruteForce) {
  for (const auto& f : small_fixtures(15))
    for (const auto& cs : {ChainSystem::all_subsets(), ChainSystem::all_chains(), support::gap_system(f.ws, 2)}) {
      auto d = enumerate_dual(f.ws, cs);
      auto rep = four_point_delta(d);
      EXPECT_EQ(rep.delta, oracle::four_point(d.size(), d.metric)) << f.name << " " << cs.descriptor();
      EXPECT_TRUE(rep.exhaustive);
      EXPECT_EQ(rep.quadruple_count, choose4(d.size()));
    }
}

TEST(Geometry, FourPointKnownValues) {
  // A 4-cycle: pair sums 2, 2, 4.
  Metric c4{0, 1, 2, 1, 1, 0, 1, 2, 2, 1, 0, 1, 1, 2, 1, 0};
  EXPECT_EQ(four_point_delta(4, c4).delta, Rational(2));
  // Trees are 0-hyperbolic.
  auto t = enumerate_dual(tripod_wallspace(3), ChainSystem::all_subsets());
  EXPECT_EQ(four_point_delta(t).delta, Rational(0));
  EXPECT_EQ(four_point_bound(2, 1), Rational(88));
}

TEST(Geometry, FourPointSamplingIsSeeded) {
  // Exhaustive below 40 vertices; the 7x7 grid has 49.
  auto d = enumerate_dual(grid_wallspace(7, 7), ChainSystem::all_subsets());
  auto a = four_point_delta(d, 100, 9), b = four_point_delta(d, 100, 9);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.worst_quadruple, b.worst_quadruple);
  EXPECT_LE(a.delta, four_point_delta(d).delta);
}

TEST(Geometry, LSeparationMatchesBruteForce) {
  for (const auto& f : small_fixtures(15))
    for (const auto& cs : {ChainSystem::all_chains(), support::gap_system(f.ws, 2)}) {
      auto rep = check_L_separated(cs, f.ws, SIZE_MAX);
      EXPECT_EQ(rep.observed, brute_L(cs, f.ws)) << f.name << " " << cs.descriptor();
    }
}

TEST(Geometry, FourPointWithinSeparationBound) {
  for (const auto& f : small_fixtures(25))
    for (const auto& cs : {ChainSystem::all_chains(), support::gap_system(f.ws, 2), support::gap_system(f.ws, 3)}) {
      const int m = certified_m(cs, f.ws);
      ASSERT_LE(m, 4);
      const auto L = check_L_separated(cs, f.ws, SIZE_MAX).observed;
      auto rep = four_point_delta(enumerate_dual(f.ws, cs), 20'000'000, 1, four_point_bound(L, m));
      EXPECT_TRUE(rep.pass) << f.name << " delta " << to_string(rep.delta) << " bound " << to_string(rep.bound);
    }
}

TEST(Geometry, CrossChainsAreMaximal) {
  std::mt19937_64 rng(21);
  for (const auto& f : small_fixtures(10))
    for (const auto& cs : {ChainSystem::all_chains(), support::gap_system(f.ws, 2)}) {
      auto d = enumerate_dual(f.ws, cs);
      std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(d.size() - 1));
      for (int it = 0; it < 15; ++it) {
        std::array<Orientation, 4> x{d.vertices[pick(rng)], d.vertices[pick(rng)], d.vertices[pick(rng)], d.vertices[pick(rng)]};
        auto chi = maximal_cross_chain(cs, f.ws, x);
        ASSERT_TRUE(is_cross_chain(cs, f.ws, chi));
        // Brute force over every assignment of corner walls.
        auto corners = corner_walls(x);
        std::vector<std::pair<WallId, int>> cand;
        for (int i = 0; i < 4; ++i)
          for (auto h : members_of(corners[i])) cand.emplace_back(h, i);
        ASSERT_LE(cand.size(), 16u);
        std::size_t best = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
          if (static_cast<std::size_t>(__builtin_popcountll(mask)) <= best) continue;
          CrossChain c;
          c.witnesses = x;
          for (std::size_t k = 0; k < cand.size(); ++k)
            if (mask >> k & 1) c.parts[cand[k].second].push_back(cand[k].first);
          bool ok = true;
          for (int i = 0; i < 4 && ok; ++i)
            for (int j = i; j < 4 && ok; ++j) {
              auto u = c.parts[i];
              if (j != i) u.insert(u.end(), c.parts[j].begin(), c.parts[j].end());
              // x_i lies at one end of the union.
              ok = oracle::nested_chain(f.ws, u) && oracle::member(cs, f.ws, u, x[i]);
            }
          if (ok) best = c.size();
        }
        EXPECT_EQ(chi.size(), best) << f.name;
        const int m = certified_m(cs, f.ws);
        const auto L = check_L_separated(cs, f.ws, SIZE_MAX).observed;
        EXPECT_TRUE(cross_vs_L(cs, f.ws, chi, L, m).pass) << f.name;
      }
    }
}

TEST(Geometry, CoarseInjectivityMatchesBruteForce) {
  std::size_t checked = 0;
  for (const auto& f : small_fixtures(10))
    for (const auto& cs : {ChainSystem::all_chains(), support::gap_system(f.ws, 2)}) {
      auto d = enumerate_dual(f.ws, cs);
      if (d.size() > 16) continue;
      ++checked;
      const int m = certified_m(cs, f.ws);
      auto rep = check_coarse_injectivity(d, m, 3);
      EXPECT_TRUE(rep.exhaustive);
      EXPECT_EQ(rep.observed_slack, brute_injectivity(d, m == 0)) << f.name << " " << cs.descriptor();
      EXPECT_TRUE(rep.pass) << f.name;
    }
  EXPECT_GT(checked, 3u);
}

TEST(Geometry, CoarseInjectivityWithinTwiceM) {
  for (const auto& f : small_fixtures(25))
    for (const auto& cs : {ChainSystem::all_chains(), support::gap_system(f.ws, 2), support::gap_system(f.ws, 3)}) {
      const int m = certified_m(cs, f.ws);
      auto rep = check_coarse_injectivity(enumerate_dual(f.ws, cs), m, 4);
      EXPECT_TRUE(rep.pass) << f.name << " " << cs.descriptor() << " slack " << to_string(rep.observed_slack);
      EXPECT_EQ(rep.bound, Rational(2 * m));
    }
}

TEST(Geometry, SageevSquareNeedsSlack) {
  // Four corners of the 3x3 l1 grid with radius 1 pairwise meet only on
  // the sides; their total intersection is empty.
  auto d = enumerate_dual(grid_wallspace(3, 3), ChainSystem::all_subsets());
  auto rep = check_coarse_injectivity(d, 0, 4);
  EXPECT_FALSE(rep.pass);
  EXPECT_GT(rep.observed_slack, 0);
  EXPECT_FALSE(rep.worst.empty());
}

TEST(Geometry, CoarseDensityOfPrincipalUltrafilters) {
  for (const auto& f : small_fixtures(15))
    for (const auto& cs : {ChainSystem::all_chains(), support::gap_system(f.ws, 2)}) {
      auto d = enumerate_dual(f.ws, cs);
      const int m = certified_m(cs, f.ws);
      const auto L = check_L_separated(cs, f.ws, SIZE_MAX).observed;
      auto rep = check_coarse_density(d, d.principal, L, m);
      std::size_t observed = 0;
      for (VertexId v = 0; v < d.size(); ++v) {
        std::size_t best = SIZE_MAX;
        for (auto s : d.principal) best = std::min<std::size_t>(best, d.dist(v, s));
        observed = std::max(observed, best);
      }
      EXPECT_EQ(rep.observed, observed);
      EXPECT_EQ(rep.bound, 3 * rep.k + 4 * (L + m + 1));
      EXPECT_TRUE(rep.pass) << f.name;
    }
  auto d = enumerate_dual(path_wallspace(2), ChainSystem::all_chains());
  EXPECT_THROW(check_coarse_density(d, {}, 1, 0), Error);
}

TEST(Geometry, WeakRoughConstantOfGeodesicSetIsZero) {
  auto d = enumerate_dual(path_wallspace(6), ChainSystem::all_chains());
  std::vector<VertexId> all(d.size());
  for (VertexId v = 0; v < d.size(); ++v) all[v] = v;
  EXPECT_EQ(weak_rough_constant(d, all), 0u);
  // Endpoints only: the midpoint of a 6-path is 3 away from both.
  EXPECT_EQ(weak_rough_constant(d, {d.principal[0], d.principal[6]}), 3u);
}

TEST(Geometry, GradedTableIsWeightedSumOfOracleDistances) {
  std::size_t checked = 0;
  for (const auto& f : small_fixtures(10)) {
    std::vector<GradedLevel> levels;
    int R = 1;
    for (const auto& cs : {support::gap_system(f.ws, 3), support::gap_system(f.ws, 2), ChainSystem::all_chains()}) {
      GradedLevel lv;
      lv.R = R;
      lv.system = cs;
      lv.m = certified_m(cs, f.ws);
      lv.L = static_cast<int>(check_L_separated(cs, f.ws, SIZE_MAX).observed);
      lv.kappa = Rational(1, R * R);
      lv.lambda = Rational(1, R * R * (lv.L + lv.m + 1));
      levels.push_back(lv);
      ++R;
    }
    auto gs = make_graded(levels, Rational(1, 50));
    auto pts = oracle::ultrafilters(f.ws);
    if (pts.size() > 20) continue;
    ++checked;
    auto table = graded_table(gs, f.ws, pts);
    const std::size_t n = pts.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        Rational want = 0;
        for (std::size_t l = 0; l < levels.size(); ++l)
          want += (levels[l].lambda + (l + 1 == levels.size() ? gs.tail_weight : Rational(0))) *
                  static_cast<long long>(oracle::dist(levels[l].system, f.ws, pts[a], pts[b]));
        ASSERT_EQ(table[a * n + b], want) << f.name;
        ASSERT_EQ(graded_dist(gs, f.ws, pts[a], pts[b]), want);
      }
    auto rep = check_graded_hyperbolicity(gs, f.ws, pts);
    // Brute-force rational four-point defect.
    Rational delta = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t e = 0; e < n; ++e) {
            Rational s[3] = {table[a * n + b] + table[c * n + e], table[a * n + c] + table[b * n + e],
                             table[a * n + e] + table[b * n + c]};
            std::sort(s, s + 3);
            delta = std::max(delta, Rational(s[2] - s[1]));
          }
    EXPECT_EQ(rep.delta, delta) << f.name;
    EXPECT_EQ(rep.bound, 16 * gs.Lambda);
    EXPECT_TRUE(rep.pass);
    EXPECT_TRUE(rep.wrg_pass) << f.name << " step " << to_string(rep.max_step) << " excess " << to_string(rep.max_triangle_excess);
  }
  EXPECT_GT(checked, 3u);
}
