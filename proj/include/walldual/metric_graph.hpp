#pragma once

// Connected unweighted graphs with an all-pairs distance table.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "walldual/common.hpp"

namespace walldual {

using Geodesic = std::vector<VertexId>;

class MetricGraph {
 public:
  MetricGraph() = default;

  MetricGraph(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges, std::vector<std::string> labels = {})
      : n_(n), adj_(n), labels_(std::move(labels)) {
    if (labels_.empty())
      for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
    if (labels_.size() != n) throw Error(ErrorCode::kInvalidArgument, "label count differs from vertex count");
    for (auto [a, b] : edges) {
      if (a >= n || b >= n) throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
      if (a == b) continue;
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
    for (auto& l : adj_) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    dist_.assign(n * n, kInf);
    parallel_for(n, [&](std::size_t s) { bfs(static_cast<VertexId>(s), nullptr, &dist_[s * n]); });
    for (auto v : dist_)
      if (v == kInf) throw Error(ErrorCode::kInvalidArgument, "graph is not connected");
  }

  static constexpr std::uint32_t kInf = UINT32_MAX;

  std::size_t size() const { return n_; }
  const std::vector<VertexId>& neighbours(VertexId v) const { return adj_[v]; }
  std::uint32_t d(VertexId a, VertexId b) const { return dist_[static_cast<std::size_t>(a) * n_ + b]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& l : adj_) e += l.size();
    return e / 2;
  }
  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId a = 0; a < n_; ++a)
      for (auto b : adj_[a])
        if (a < b) out.emplace_back(a, b);
    return out;
  }
  std::uint32_t diameter() const { return dist_.empty() ? 0 : *std::max_element(dist_.begin(), dist_.end()); }

  // BFS from s avoiding vertices in `blocked` (if given); out[v] = distance
  // or kInf.
  void bfs(VertexId s, const Bits* blocked, std::uint32_t* out) const {
    std::fill(out, out + n_, kInf);
    if (blocked && blocked->test(s)) return;
    std::deque<VertexId> q{s};
    out[s] = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (auto v : adj_[u])
        if (out[v] == kInf && !(blocked && blocked->test(v))) {
          out[v] = out[u] + 1;
          q.push_back(v);
        }
    }
  }

  Bits ball(VertexId c, std::uint32_t r) const {
    Bits b(n_);
    for (VertexId v = 0; v < n_; ++v)
      if (d(c, v) <= r) b.set(v);
    return b;
  }

  // Distance between vertex sets; kInf if either is empty.
  std::uint32_t set_distance(const Bits& a, const Bits& b) const {
    std::uint32_t best = kInf;
    for (auto x : members_of(a))
      for (auto y : members_of(b)) best = std::min(best, d(x, y));
    return best;
  }

  bool is_geodesic(const Geodesic& g) const {
    if (g.empty()) return false;
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      if (d(g[i], g[i + 1]) != 1) return false;
    return d(g.front(), g.back()) == g.size() - 1;
  }

  // Calls f on every geodesic from a to b until f returns false or `budget`
  // geodesics were produced. Returns the number produced.
  std::size_t for_each_geodesic(VertexId a, VertexId b, std::size_t budget, const std::function<bool(const Geodesic&)>& f) const {
    std::size_t produced = 0;
    bool stop = false;
    Geodesic path{a};
    std::function<void(VertexId)> rec = [&](VertexId u) {
      if (stop) return;
      if (u == b) {
        ++produced;
        if (!f(path) || produced >= budget) stop = true;
        return;
      }
      for (auto v : adj_[u]) {
        if (d(v, b) + 1 != d(u, b)) continue;
        path.push_back(v);
        rec(v);
        path.pop_back();
        if (stop) return;
      }
    };
    if (budget > 0) rec(a);
    return produced;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<VertexId>> adj_;
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> dist_;
};

// All vertices of alpha closest to x.
inline std::vector<VertexId> closest_point_projection(const MetricGraph& g, const Geodesic& alpha, VertexId x) {
  std::uint32_t best = MetricGraph::kInf;
  for (auto v : alpha) best = std::min(best, g.d(x, v));
  std::vector<VertexId> out;
  for (auto v : alpha)
    if (g.d(x, v) == best) out.push_back(v);
  return out;
}

// Positions along alpha of the projection of x, as [lo, hi].
inline std::pair<std::uint32_t, std::uint32_t> projection_span(const MetricGraph& g, const Geodesic& alpha, VertexId x) {
  std::uint32_t best = MetricGraph::kInf, lo = 0, hi = 0;
  for (std::uint32_t i = 0; i < alpha.size(); ++i) {
    auto dv = g.d(x, alpha[i]);
    if (dv < best) {
      best = dv;
      lo = hi = i;
    } else if (dv == best) {
      hi = i;
    }
  }
  return {lo, hi};
}

// ------------------------------------------------------------- fixtures

inline MetricGraph path_graph(std::size_t edges) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 0; i < edges; ++i) e.emplace_back(i, i + 1);
  return MetricGraph(edges + 1, e);
}

inline MetricGraph grid_graph(std::size_t rows, std::size_t cols) {
  std::vector<std::pair<VertexId, VertexId>> e;
  auto id = [&](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
    }
  return MetricGraph(rows * cols, e);
}

inline MetricGraph star_graph(std::size_t leaves) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return MetricGraph(leaves + 1, e);
}

// Binary tree of the given depth in which every internal node has two
// children and one of them is a leaf: spine 0..depth, and leaf depth+1+i
// hangs off spine vertex i.
inline MetricGraph caterpillar_tree(std::size_t depth) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 0; i < depth; ++i) e.emplace_back(i, i + 1);
  for (VertexId i = 0; i < depth; ++i) e.emplace_back(i, static_cast<VertexId>(depth + 1 + i));
  return MetricGraph(2 * depth + 1, e);
}

}  // namespace walldual
