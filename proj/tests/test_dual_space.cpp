#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace walldual;
using support::small_fixtures;

namespace {

std::set<std::string> as_strings(const std::vector<Orientation>& v) {
  std::set<std::string> s;
  for (const auto& o : v) s.insert(o.str());
  return s;
}

std::size_t hamming(const Orientation& a, const Orientation& b) { return (a.bits() ^ b.bits()).count(); }

// Convex hull in the Hamming metric: close under geodesic intervals.
std::set<VertexId> interval_hull(const DualSpace& d, const std::vector<VertexId>& pts) {
  std::set<VertexId> h(pts.begin(), pts.end());
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<VertexId> cur(h.begin(), h.end());
    for (auto a : cur)
      for (auto b : cur)
        for (VertexId z = 0; z < d.size(); ++z)
          if (!h.count(z) && hamming(d.vertices[a], d.vertices[z]) + hamming(d.vertices[z], d.vertices[b]) ==
                                 hamming(d.vertices[a], d.vertices[b])) {
            h.insert(z);
            grew = true;
          }
  }
  return h;
}

}  // namespace

TEST(DualSpace, VerticesAreExactlyTheUltrafilters) {
  for (const auto& f : small_fixtures()) {
    auto d = enumerate_dual(f.ws, ChainSystem::all_chains());
    EXPECT_EQ(as_strings(d.vertices), as_strings(oracle::ultrafilters(f.ws))) << f.name;
    ASSERT_EQ(d.principal.size(), f.ws.point_count());
    for (PointId s = 0; s < f.ws.point_count(); ++s) EXPECT_EQ(d.vertices[d.principal[s]], principal_ultrafilter(f.ws, s));
  }
}

TEST(DualSpace, ReachabilityAloneFindsEveryVertexOfACubeComplex) {
  // Without the exhaustive sweep the flip search must still reach all of
  // them: the cube complex is connected.
  DualOptions opt;
  opt.sweep_max_walls = 0;
  for (const auto& f : small_fixtures(10)) {
    auto d = enumerate_dual(f.ws, ChainSystem::all_subsets(), opt);
    EXPECT_EQ(d.size(), oracle::ultrafilters(f.ws).size()) << f.name;
  }
}

TEST(DualSpace, MetricMatchesBruteForceDistance) {
  for (const auto& f : small_fixtures(12)) {
    std::vector<ChainSystem> systems{ChainSystem::all_subsets(), ChainSystem::all_chains(), support::gap_system(f.ws, 2)};
    for (const auto& cs : systems) {
      auto d = enumerate_dual(f.ws, cs);
      for (VertexId a = 0; a < d.size(); ++a)
        for (VertexId b = 0; b < d.size(); ++b)
          ASSERT_EQ(d.dist(a, b), oracle::dist(cs, f.ws, d.vertices[a], d.vertices[b]))
              << f.name << " " << cs.descriptor() << " " << d.vertices[a].str() << " " << d.vertices[b].str();
    }
  }
}

TEST(DualSpace, AllSubsetsMetricIsSeparatingWallCount) {
  for (const auto& f : small_fixtures()) {
    auto d = enumerate_dual(f.ws, ChainSystem::all_subsets());
    for (VertexId a = 0; a < d.size(); ++a)
      for (VertexId b = 0; b < d.size(); ++b) EXPECT_EQ(d.dist(a, b), hamming(d.vertices[a], d.vertices[b]));
    // The metric is the path metric of its unit edges.
    EXPECT_EQ(graph_metric(d.size(), d.edges), d.metric) << f.name;
  }
}

TEST(DualSpace, VertexCapRaisesStateExplosion) {
  DualOptions opt;
  opt.vertex_cap = 3;
  try {
    enumerate_dual(grid_wallspace(3, 3), ChainSystem::all_chains(), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStateExplosion);
  }
}

TEST(DualSpace, HellyAgreesWithBruteForce) {
  for (const auto& f : small_fixtures(12)) {
    for (const auto& cs : {ChainSystem::all_subsets(), ChainSystem::all_chains()}) {
      auto d = enumerate_dual(f.ws, cs);
      if (d.size() > 30) continue;
      auto rep = verify_helly(d, 5);
      EXPECT_EQ(rep.pass, oracle::helly(d.size(), d.metric, 4)) << f.name << " " << cs.descriptor();
      if (rep.pass) continue;
      // The reported family is a genuine counterexample.
      ASSERT_FALSE(rep.family.empty());
      for (const auto& a : rep.family)
        for (const auto& b : rep.family) EXPECT_LE(d.dist(a.center, b.center), a.radius + b.radius);
      bool common = false;
      for (VertexId v = 0; v < d.size() && !common; ++v) {
        bool in = true;
        for (const auto& b : rep.family) in = in && d.dist(b.center, v) <= b.radius;
        common = in;
      }
      EXPECT_FALSE(common);
    }
  }
}

TEST(DualSpace, ChainDualsOfCubeFixturesAreHelly) {
  for (auto ws : {path_wallspace(6), grid_wallspace(3, 3), tripod_wallspace(2)}) {
    auto d = enumerate_dual(ws, ChainSystem::all_chains());
    EXPECT_TRUE(verify_helly(d).pass);
  }
  // The square grid under the l1 metric is not Helly.
  auto sq = enumerate_dual(grid_wallspace(3, 3), ChainSystem::all_subsets());
  EXPECT_FALSE(verify_helly(sq).pass);
}

TEST(DualSpace, BallsAreCutOutByDeepWalls) {
  for (const auto& f : small_fixtures(12)) {
    for (const auto& cs : {ChainSystem::all_chains(), support::gap_system(f.ws, 2), support::gap_system(f.ws, 3),
                           support::two_witness_system(), support::explicit_pairs(f.ws)}) {
      auto d = enumerate_dual(f.ws, cs);
      for (VertexId x = 0; x < d.size(); ++x) {
        auto depth = ball_depths(cs, f.ws, d.vertices[x]);
        for (std::size_t r = 0; r <= d.diameter(); ++r) {
          auto ball = ball_from_depths(d, d.vertices[x], depth, r);
          std::vector<VertexId> expect;
          for (VertexId y = 0; y < d.size(); ++y)
            if (d.dist(x, y) <= r) expect.push_back(y);
          ASSERT_EQ(ball.members, expect) << f.name << " " << cs.descriptor() << " x=" << d.vertices[x].str() << " r=" << r;
          if (r == 0) EXPECT_EQ(ball.members, std::vector<VertexId>{x});
        }
      }
    }
  }
}

TEST(DualSpace, BallsOfAllSubsetsAreRejected) {
  auto ws = path_wallspace(3);
  EXPECT_THROW(ball_depths(ChainSystem::all_subsets(), ws, principal_ultrafilter(ws, 0)), Error);
}

TEST(DualSpace, HullMatchesIntervalClosure) {
  std::mt19937_64 rng(5);
  for (const auto& f : small_fixtures(12)) {
    auto d = enumerate_dual(f.ws, ChainSystem::all_subsets());
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(d.size() - 1));
    for (int it = 0; it < 10; ++it) {
      std::vector<VertexId> pts{pick(rng), pick(rng), pick(rng)};
      std::vector<Orientation> os;
      for (auto p : pts) os.push_back(d.vertices[p]);
      auto C = hull(d, os);
      auto expect = interval_hull(d, pts);
      EXPECT_EQ(std::set<VertexId>(C.members.begin(), C.members.end()), expect) << f.name;
      // The gate is the nearest point of the hull and lies between z and
      // every member.
      for (VertexId z = 0; z < d.size(); ++z) {
        auto g = gate(d, C, d.vertices[z]);
        auto gi = d.at(g);
        ASSERT_TRUE(expect.count(gi));
        for (auto w : expect) EXPECT_EQ(d.dist(z, w), d.dist(z, gi) + d.dist(gi, w));
      }
    }
  }
}

TEST(DualSpace, GateCalculusHoldsOnChainDuals) {
  for (const auto& f : small_fixtures(10)) {
    for (const auto& cs : {ChainSystem::all_subsets(), ChainSystem::all_chains()}) {
      auto rep = check_gate_calculus(enumerate_dual(f.ws, cs), 60, 3);
      EXPECT_TRUE(rep.pass) << f.name << ": " << rep.failure;
      EXPECT_EQ(rep.instances, 60u);
    }
  }
}

TEST(DualSpace, EmptyTargetsAreRejected) {
  auto d = enumerate_dual(path_wallspace(2), ChainSystem::all_chains());
  try {
    hull(d, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTarget);
  }
  EXPECT_THROW(gate_via_medians({}, d.vertices[0]), Error);
}

TEST(DualSpace, MedianAxiomsAndMedianGraphs) {
  for (const auto& f : small_fixtures(10)) {
    auto cube = enumerate_dual(f.ws, ChainSystem::all_subsets());
    EXPECT_TRUE(verify_median_graph(cube).pass) << f.name;
    auto chains = enumerate_dual(f.ws, ChainSystem::all_chains());
    EXPECT_TRUE(verify_median_axioms(chains).pass) << f.name;
  }
  // The l-infinity grid has diagonal unit edges and is not a median graph.
  auto king = enumerate_dual(grid_wallspace(3, 3), ChainSystem::all_chains());
  auto rep = verify_median_graph(king);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.reason.empty());
}

TEST(DualSpace, MedianGraphRecogniserRejectsNonMedianEdges) {
  // Same vertices, one edge dropped.
  auto ws = path_wallspace(3);
  auto d = enumerate_dual(ws, ChainSystem::all_subsets());
  std::vector<std::pair<VertexId, VertexId>> edges(d.edges.begin(), d.edges.end() - 1);
  auto broken = make_dual(ws, ChainSystem::all_subsets(), d.vertices, edges);
  EXPECT_FALSE(verify_median_graph(broken).pass);
}

TEST(DualSpace, FixedPointsOfFiniteGroups) {
  for (std::size_t points : {4, 5, 6, 7, 8}) {
    auto ws = path_wallspace(points - 1);
    auto d = enumerate_dual(ws, ChainSystem::all_chains());
    auto rep = fixed_point_finite_group(d, {path_reflection(points)});
    EXPECT_TRUE(rep.verified) << points << ": " << rep.failure;
    EXPECT_EQ(rep.group_order, 2u);
    // Odd point count: the middle point is fixed and nothing is doubled.
    if (points % 2 == 1) {
      EXPECT_EQ(rep.orbit.size(), 1u);
      EXPECT_TRUE(rep.point.inward.none());
    } else {
      EXPECT_EQ(rep.point.inward.count(), 1u);
    }
  }
  for (std::size_t leg : {1, 2, 3}) {
    auto ws = tripod_wallspace(leg);
    auto rep = fixed_point_finite_group(enumerate_dual(ws, ChainSystem::all_chains()), {tripod_rotation(leg)});
    EXPECT_TRUE(rep.verified) << rep.failure;
    EXPECT_EQ(rep.group_order, 3u);
  }
}

TEST(DualSpace, FixedPointRejectsBadPermutations) {
  auto ws = path_wallspace(3);
  auto d = enumerate_dual(ws, ChainSystem::all_chains());
  EXPECT_THROW(fixed_point_finite_group(d, {{0, 0, 1, 2}}), Error);
  EXPECT_THROW(fixed_point_finite_group(d, {{0, 1, 2}}), Error);
  try {
    fixed_point_finite_group(d, {{1, 0, 2, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotWallPreserving);
  }
}

TEST(DualSpace, SubdivisionVerifierCatchesNonInvariantPoints) {
  auto ws = path_wallspace(3);
  Orientation o = principal_ultrafilter(ws, 0);
  SubdivisionPoint p{o, Bits(3)};
  EXPECT_FALSE(verify_subdivision_point(ws, {path_reflection(4)}, p).empty());
  EXPECT_TRUE(verify_subdivision_point(ws, {}, p).empty());
}
