#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"

namespace support {

using namespace walldual;

struct Named {
  std::string name;
  Wallspace ws;
};

// Small cube-complex fixtures plus seeded random wallspaces.
inline std::vector<Named> small_fixtures(std::size_t randoms = 25, std::uint64_t seed0 = 100) {
  std::vector<Named> out{{"path5", path_wallspace(5)}, {"grid3", grid_wallspace(3, 3)}, {"tripod2", tripod_wallspace(2)}};
  for (std::uint64_t s = 0; s < randoms; ++s) out.push_back({"random" + std::to_string(seed0 + s), random_wallspace(seed0 + s, 8, 7)});
  return out;
}

// Consecutive chain elements must have lower sides differing by at least
// `gap` points.
inline ChainSystem gap_system(const Wallspace& ws, std::size_t gap) {
  auto own = std::make_shared<const Wallspace>(ws);
  auto fn = [own, gap](OrientedWall lo, OrientedWall hi) { return lower_size(*own, hi) >= lower_size(*own, lo) + gap; };
  return ChainSystem::pairwise(std::make_shared<WallPairPredicate>("gap" + std::to_string(gap), fn, true));
}

// Two witnesses per wall; witness 1 never pairs with witness 1. Not
// interval-closed, so searches take the branch-and-bound route.
class TwoWitness final : public WitnessPredicate {
 public:
  std::string name() const override { return "two_witness"; }
  std::size_t witness_count(WallId) const override { return 2; }
  bool admissible(OrientedWall, std::uint32_t i, OrientedWall, std::uint32_t j) const override { return !(i == 1 && j == 1); }
  bool interval_closed() const override { return false; }
};

inline ChainSystem two_witness_system() { return ChainSystem::pairwise(std::make_shared<TwoWitness>()); }

// Explicit system: every chain of at most two walls.
inline ChainSystem explicit_pairs(const Wallspace& ws) {
  std::vector<std::vector<WallId>> members;
  for (WallId h = 0; h < ws.wall_count(); ++h) {
    members.push_back({h});
    for (WallId k = h + 1; k < ws.wall_count(); ++k)
      if (is_chain(ws, {h, k})) members.push_back({h, k});
  }
  return ChainSystem::explicit_members(ws.wall_count(), members);
}

inline std::vector<std::vector<std::uint32_t>> adjacency(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& e) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (auto [a, b] : e) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

}  // namespace support
