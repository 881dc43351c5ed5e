#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace walldual;

namespace {

Wallspace square() { return Wallspace(4, std::vector<Bits>{make_bits(4, {0, 2}), make_bits(4, {0, 1})}); }

}  // namespace

TEST(Wallspace, RejectsDuplicateBipartitions) {
  EXPECT_THROW(Wallspace(3, std::vector<Bits>{make_bits(3, {0}), make_bits(3, {1, 2})}), Error);
  try {
    Wallspace(3, std::vector<Bits>{make_bits(3, {0}), make_bits(3, {1, 2})});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStructural);
  }
}

TEST(Wallspace, RejectsEmptyHalfspace) {
  EXPECT_THROW(Wallspace(3, std::vector<Bits>{make_bits(3, {})}), Error);
  EXPECT_THROW(Wallspace(3, std::vector<Bits>{make_bits(3, {0, 1, 2})}), Error);
}

TEST(Wallspace, AllowsNoWalls) {
  Wallspace ws(3, std::vector<Bits>{});
  EXPECT_EQ(ws.wall_count(), 0u);
  EXPECT_TRUE(is_consistent(ws, Orientation(0)));
}

TEST(Wallspace, ClassifiesSquareAndPath) {
  auto sq = square();
  EXPECT_EQ(classify_pair(sq, 0, 1).kind, Relation::kCross);
  auto p = path_wallspace(3);
  EXPECT_EQ(classify_pair(p, 0, 1).kind, Relation::kNested);
  auto t = tripod_wallspace();
  // {1} and {2} are disjoint minus sides facing each other.
  EXPECT_EQ(classify_pair(t, 0, 1).kind, Relation::kDisjointFacing);
  EXPECT_THROW(classify_pair(p, 1, 1), Error);
}

TEST(Wallspace, RelationMasksMatchBitsets) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto ws = random_wallspace(seed);
    for (WallId h = 0; h < ws.wall_count(); ++h)
      for (WallId k = 0; k < ws.wall_count(); ++k) {
        if (h == k) continue;
        for (Side a : {Side::kMinus, Side::kPlus})
          for (Side b : {Side::kMinus, Side::kPlus}) {
            const Bits A = oracle::side(ws, h, a), B = oracle::side(ws, k, b);
            EXPECT_EQ(ws.disjoint(h, a, k, b), !A.intersects(B));
            EXPECT_EQ(ws.included(h, a, k, b), A.is_subset_of(B));
          }
        EXPECT_EQ(ws.crosses(h, k), oracle::crosses(ws, h, k));
      }
  }
}

TEST(Wallspace, ConsistencyMatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto ws = random_wallspace(seed);
    const std::size_t P = ws.wall_count();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << P); ++mask) {
      Orientation o(P);
      for (WallId h = 0; h < P; ++h)
        if (mask >> h & 1) o.set(h, Side::kPlus);
      EXPECT_EQ(is_consistent(ws, o), oracle::consistent(ws, o));
    }
  }
}

TEST(Wallspace, PrincipalUltrafiltersAreConsistent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto ws = random_wallspace(seed);
    for (PointId s = 0; s < ws.point_count(); ++s) {
      auto o = principal_ultrafilter(ws, s);
      EXPECT_TRUE(oracle::consistent(ws, o));
      for (WallId h = 0; h < ws.wall_count(); ++h) EXPECT_TRUE(oracle::side(ws, h, o[h]).test(s));
    }
  }
}

TEST(Wallspace, ExtendFilterKeepsChoicesAndIsConsistent) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto ws = random_wallspace(seed);
    auto o = principal_ultrafilter(ws, 0);
    Filter f(ws.wall_count());
    for (WallId h = 0; h < ws.wall_count(); h += 2) f.fix(h, o[h]);
    auto e = extend_filter(ws, f);
    EXPECT_TRUE(oracle::consistent(ws, e));
    for (WallId h = 0; h < ws.wall_count(); h += 2) EXPECT_EQ(e[h], o[h]);
  }
}

TEST(Wallspace, ExtendFilterRejectsNonFilter) {
  auto p = path_wallspace(3);
  Filter f(3);
  f.fix(0, Side::kPlus);   // {1,2,3}
  f.fix(2, Side::kMinus);  // {0,1,2}
  EXPECT_NO_THROW(extend_filter(p, f));
  Filter g(3);
  g.fix(0, Side::kMinus);  // {0}
  g.fix(1, Side::kPlus);   // {2,3}
  try {
    extend_filter(p, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInputNotFilter);
  }
}

TEST(Wallspace, MedianIsMajorityAndStaysConsistent) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto ws = random_wallspace(seed);
    auto u = oracle::ultrafilters(ws);
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = 0; b < u.size(); b += 3)
        for (std::size_t c = 0; c < u.size(); c += 5) {
          auto m = median(u[a], u[b], u[c]);
          EXPECT_TRUE(oracle::consistent(ws, m));
          for (WallId h = 0; h < ws.wall_count(); ++h) {
            int plus = (u[a][h] == Side::kPlus) + (u[b][h] == Side::kPlus) + (u[c][h] == Side::kPlus);
            EXPECT_EQ(m[h] == Side::kPlus, plus >= 2);
          }
        }
  }
}

TEST(Wallspace, FindWallAcceptsEitherSide) {
  auto p = path_wallspace(4);
  EXPECT_EQ(p.find_wall(make_bits(5, {0, 1})), std::optional<WallId>(1));
  EXPECT_EQ(p.find_wall(make_bits(5, {2, 3, 4})), std::optional<WallId>(1));
  EXPECT_FALSE(p.find_wall(make_bits(5, {1})).has_value());
}

TEST(Wallspace, OrientationStringRoundTrip) {
  auto o = Orientation::parse("+-+--");
  EXPECT_EQ(o.str(), "+-+--");
  EXPECT_THROW(Orientation::parse("+x"), Error);
}
