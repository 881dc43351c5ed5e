#pragma once

// Normal wall paths: gate the target to the integer balls around the source.

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "walldual/dual_space.hpp"

namespace walldual {

struct NormalWallPath {
  Orientation source, target;
  std::vector<Orientation> steps;  // steps[0] = source, steps.back() = target

  std::size_t length() const { return steps.empty() ? 0 : steps.size() - 1; }
};

// gate(B(x,r), y) for r = 0..upto, reusing one depth table.
inline std::vector<Orientation> gated_steps(const DualSpace& d, const Orientation& x, const Orientation& y,
                                            std::size_t upto, const std::vector<std::size_t>& depth) {
  std::vector<Orientation> out;
  out.reserve(upto + 1);
  for (std::size_t r = 0; r <= upto; ++r) out.push_back(gate(d, ball_from_depths(d, x, depth, r), y));
  return out;
}

// `extra` bounds the steps tried past dist_C(x,y) before giving up.
inline NormalWallPath normal_wall_path(const DualSpace& d, const Orientation& x, const Orientation& y,
                                       std::optional<std::size_t> extra = std::nullopt) {
  const std::size_t n = dist_C(d.system, *d.ws, x, y);
  auto depth = ball_depths(d.system, *d.ws, x);
  NormalWallPath p{x, y, gated_steps(d, x, y, n, depth)};
  if (p.steps.back() == y) return p;
  const std::size_t cap = extra.value_or(std::max<std::size_t>(n, d.system.declared_m.value_or(0)));
  for (std::size_t r = n + 1; r <= n + cap; ++r) {
    p.steps.push_back(gate(d, ball_from_depths(d, x, depth, r), y));
    if (p.steps.back() == y) return p;
  }
  throw Error(ErrorCode::kNonTermination,
              "normal wall path from " + x.str() + " to " + y.str() + " did not reach the target within " +
                  std::to_string(n + cap) + " steps");
}

// Whole path as vertex ids of d.
inline std::vector<VertexId> path_vertices(const DualSpace& d, const NormalWallPath& p) {
  std::vector<VertexId> out;
  for (const auto& o : p.steps) out.push_back(d.at(o));
  return out;
}

// ------------------------------------------------------- rough geodesics

struct RoughGeodesicReport {
  bool pass = true;
  int m = 0;
  std::size_t n = 0;
  // First violation, if any.
  std::optional<std::size_t> r1, r2;
  std::string violated;
  // Largest observed |d(steps[r1],steps[r2]) - (r2-r1)|.
  std::size_t max_gap_defect = 0;
};

inline RoughGeodesicReport check_rough_geodesic(const DualSpace& d, const NormalWallPath& p, int m) {
  RoughGeodesicReport rep;
  rep.m = m;
  const auto ids = path_vertices(d, p);
  const std::size_t n = ids.size() - 1;
  rep.n = n;
  const long M = m;
  auto fail = [&](std::size_t a, std::optional<std::size_t> b, std::string what) {
    if (!rep.pass) return;
    rep.pass = false;
    rep.r1 = a;
    rep.r2 = b;
    rep.violated = std::move(what);
  };
  if (d.dist(ids.front(), ids.back()) != n) fail(n, std::nullopt, "path length differs from dist_C(x,y)");
  for (std::size_t r = 0; r <= n; ++r) {
    const long dx = d.dist(ids.front(), ids[r]);
    const long dy = d.dist(ids[r], ids.back());
    const long R = static_cast<long>(r), N = static_cast<long>(n);
    if (dx < R - M || dx > R) fail(r, std::nullopt, "r-m <= d(x,s_r) <= r");
    if (dy < N - R || dy > N - R + M) fail(r, std::nullopt, "n-r <= d(s_r,y) <= n-r+m");
  }
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = a + 1; b <= n; ++b) {
      const long gap = static_cast<long>(d.dist(ids[a], ids[b])) - static_cast<long>(b - a);
      const auto defect = static_cast<std::size_t>(gap < 0 ? -gap : gap);
      rep.max_gap_defect = std::max(rep.max_gap_defect, defect);
      if (defect > static_cast<std::size_t>(3 * m)) fail(a, b, "|d(s_a,s_b)-(b-a)| <= 3m");
    }
  return rep;
}

// Median path property: mu(s_a, s_b, s_c) = s_b for a < b < c.
inline bool is_median_path(const NormalWallPath& p) {
  const auto& s = p.steps;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      for (std::size_t c = b + 1; c < s.size(); ++c)
        if (median(s[a], s[b], s[c]) != s[b]) return false;
  return true;
}

// --------------------------------------------------------------- bicombing

// All normal wall paths between vertices of d, computed lazily.
class PathTable {
 public:
  explicit PathTable(const DualSpace& d) : d_(d), rows_(d.size()) {}

  const std::vector<VertexId>& get(VertexId x, VertexId y) {
    auto& row = rows_[x];
    if (row.empty()) fill(x);
    return row[y];
  }

  // Precomputes rows for the given sources in parallel.
  void prefetch(const std::vector<VertexId>& sources) {
    std::vector<VertexId> todo;
    for (auto x : sources)
      if (rows_[x].empty() && std::find(todo.begin(), todo.end(), x) == todo.end()) todo.push_back(x);
    parallel_for(todo.size(), [&](std::size_t i) { fill(todo[i]); });
  }

 private:
  void fill(VertexId x) {
    std::vector<std::vector<VertexId>> row(d_.size());
    const Orientation& xo = d_.vertices[x];
    auto depth = ball_depths(d_.system, *d_.ws, xo);
    for (VertexId y = 0; y < d_.size(); ++y) {
      const std::size_t n = d_.dist(x, y);
      for (const auto& o : gated_steps(d_, xo, d_.vertices[y], n, depth)) row[y].push_back(d_.at(o));
      if (row[y].back() != y) {
        // Defer to the capped constructor for its diagnostic.
        row[y] = path_vertices(d_, normal_wall_path(d_, xo, d_.vertices[y]));
      }
    }
    rows_[x] = std::move(row);
  }

  const DualSpace& d_;
  std::vector<std::vector<std::vector<VertexId>>> rows_;
};

using Quadruple = std::array<VertexId, 4>;

inline std::vector<Quadruple> sample_quadruples(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<Quadruple> out;
  if (n == 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  for (std::size_t i = 0; i < count; ++i) out.push_back({pick(rng), pick(rng), pick(rng), pick(rng)});
  return out;
}

struct BicombingReport {
  bool pass = true;
  int m = 0;
  std::size_t quadruples = 0;
  long max_excess = 0;  // max over r of lhs - (max{d(x1,x2),d(y1,y2)}), can be negative
  Quadruple worst{};
  std::size_t worst_r = 0;
};

// Quadruples are (x1, y1, x2, y2). Paths are extended constantly past their
// endpoints so every r up to the longer path is compared.
inline BicombingReport check_bicombing(const DualSpace& d, const std::vector<Quadruple>& quadruples, int m,
                                       PathTable* table = nullptr) {
  std::optional<PathTable> own;
  if (!table) table = &own.emplace(d);
  std::vector<VertexId> sources;
  for (const auto& q : quadruples) {
    sources.push_back(q[0]);
    sources.push_back(q[2]);
  }
  table->prefetch(sources);
  BicombingReport rep;
  rep.m = m;
  rep.max_excess = LONG_MIN;
  for (const auto& q : quadruples) {
    const auto& p1 = table->get(q[0], q[1]);
    const auto& p2 = table->get(q[2], q[3]);
    const long bound = std::max(d.dist(q[0], q[2]), d.dist(q[1], q[3]));
    const std::size_t len = std::max(p1.size(), p2.size());
    for (std::size_t r = 0; r < len; ++r) {
      const auto a = p1[std::min(r, p1.size() - 1)];
      const auto b = p2[std::min(r, p2.size() - 1)];
      const long excess = static_cast<long>(d.dist(a, b)) - bound;
      if (excess > rep.max_excess) {
        rep.max_excess = excess;
        rep.worst = q;
        rep.worst_r = r;
      }
    }
    ++rep.quadruples;
  }
  if (quadruples.empty()) rep.max_excess = 0;
  rep.pass = rep.max_excess <= 3L * m;
  return rep;
}

// ------------------------------------------------- one-sided consistency

// sigma(x, sigma_xy(r)) agrees with sigma(x,y) on 0..r.
inline bool check_one_sided_consistency(const DualSpace& d, const Orientation& x, const Orientation& y, std::size_t r) {
  auto depth = ball_depths(d.system, *d.ws, x);
  const std::size_t n = dist_C(d.system, *d.ws, x, y);
  if (r > n) throw Error(ErrorCode::kInvalidArgument, "r exceeds dist_C(x,y)");
  auto full = gated_steps(d, x, y, r, depth);
  auto inner = gated_steps(d, x, full[r], r, depth);
  return inner == full;
}

}  // namespace walldual
