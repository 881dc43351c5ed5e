#pragma once

// Small wallspaces used by tests, the acceptance suite and the CLI.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "walldual/wallspace.hpp"

namespace walldual {

// Vertices 0..edges of a path; wall i cuts edge (i, i+1).
inline Wallspace path_wallspace(std::size_t edges) {
  const std::size_t n = edges + 1;
  std::vector<Bits> walls;
  for (std::size_t i = 0; i < edges; ++i) {
    Bits b(n);
    for (std::size_t p = 0; p <= i; ++p) b.set(p);
    walls.push_back(std::move(b));
  }
  return Wallspace(n, std::move(walls));
}

// rows x cols grid of points (row-major); one wall per row gap and per
// column gap.
inline Wallspace grid_wallspace(std::size_t rows, std::size_t cols) {
  const std::size_t n = rows * cols;
  std::vector<Bits> walls;
  for (std::size_t c = 0; c + 1 < cols; ++c) {
    Bits b(n);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t k = 0; k <= c; ++k) b.set(r * cols + k);
    walls.push_back(std::move(b));
  }
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    Bits b(n);
    for (std::size_t k = 0; k <= r; ++k)
      for (std::size_t c = 0; c < cols; ++c) b.set(k * cols + c);
    walls.push_back(std::move(b));
  }
  return Wallspace(n, std::move(walls));
}

// Centre 0 with legs of the given length; leg j holds points
// 1 + j*len .. (j+1)*len, nearest the centre first.
inline Wallspace tripod_wallspace(std::size_t leg = 1) {
  const std::size_t n = 1 + 3 * leg;
  std::vector<Bits> walls;
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < leg; ++i) {
      Bits b(n);
      for (std::size_t k = i; k < leg; ++k) b.set(1 + j * leg + k);
      walls.push_back(std::move(b));
    }
  return Wallspace(n, std::move(walls));
}

// Random wallspace with 2..max_points points and up to max_walls distinct
// walls; never empty of walls when at least two points exist.
inline Wallspace random_wallspace(std::uint64_t seed, std::size_t max_points = 10, std::size_t max_walls = 8) {
  std::mt19937_64 rng(seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, max_points)(rng);
  const std::size_t want = std::uniform_int_distribution<std::size_t>(1, max_walls)(rng);
  std::set<Bits> seen;
  std::vector<Bits> walls;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t attempt = 0; walls.size() < want && attempt < 64 * want; ++attempt) {
    Bits b(n);
    for (std::size_t p = 0; p < n; ++p) b.set(p, coin(rng));
    if (b.none() || b.all()) continue;
    Bits canon = b.test(0) ? b : ~b;
    if (!seen.insert(canon).second) continue;
    walls.push_back(std::move(b));
  }
  return Wallspace(n, std::move(walls));
}

// Reflection p -> n-1-p of a path wallspace's points.
inline std::vector<PointId> path_reflection(std::size_t points) {
  std::vector<PointId> g(points);
  for (std::size_t p = 0; p < points; ++p) g[p] = static_cast<PointId>(points - 1 - p);
  return g;
}

// Rotation of the tripod's legs.
inline std::vector<PointId> tripod_rotation(std::size_t leg = 1) {
  const std::size_t n = 1 + 3 * leg;
  std::vector<PointId> g(n);
  g[0] = 0;
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < leg; ++i) g[1 + j * leg + i] = static_cast<PointId>(1 + ((j + 1) % 3) * leg + i);
  return g;
}

}  // namespace walldual
