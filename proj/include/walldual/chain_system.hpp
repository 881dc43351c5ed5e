#pragma once

// Dualisable systems C of wall subsets, the dual metric dist_C, the
// gluability and L-separation checkers, and graded systems.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "walldual/common.hpp"
#include "walldual/wallspace.hpp"

namespace walldual {

enum class SystemKind { kAllSubsets, kAllChains, kPairwise, kExplicit };

inline const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::kAllSubsets: return "all_subsets";
    case SystemKind::kAllChains: return "all_chains";
    case SystemKind::kPairwise: return "pairwise";
    case SystemKind::kExplicit: return "explicit";
  }
  return "?";
}

// A wall together with the side facing the start of a chain.
struct OrientedWall {
  WallId wall = 0;
  Side lower = Side::kMinus;

  friend bool operator==(const OrientedWall& a, const OrientedWall& b) { return a.wall == b.wall && a.lower == b.lower; }
  friend bool operator<(const OrientedWall& a, const OrientedWall& b) {
    return a.wall != b.wall ? a.wall < b.wall : a.lower < b.lower;
  }
};

inline OrientedWall reversed(OrientedWall z) { return {z.wall, opposite(z.lower)}; }

// lower(a) is a proper subset of lower(b).
inline bool precedes(const Wallspace& ws, OrientedWall a, OrientedWall b) {
  return a.wall != b.wall && ws.included(a.wall, a.lower, b.wall, b.lower);
}

inline std::size_t lower_size(const Wallspace& ws, OrientedWall z) { return ws.halfspace(z.wall, z.lower).count(); }

// Orders a set of walls as a chain, oriented so that the first lower side
// is the minus side of the smallest wall id. Returns nullopt if the set is
// not totally nested.
inline std::optional<std::vector<OrientedWall>> chain_order(const Wallspace& ws, const std::vector<WallId>& walls) {
  std::vector<OrientedWall> out;
  if (walls.empty()) return out;
  const WallId h0 = *std::min_element(walls.begin(), walls.end());
  out.push_back({h0, Side::kMinus});
  for (auto k : walls) {
    if (k == h0) continue;
    const auto& rel = ws.relation(h0, k);
    if (rel.kind != Relation::kNested && rel.kind != Relation::kDisjointFacing) return std::nullopt;
    OrientedWall z{k, Side::kMinus};
    bool placed = false;
    for (Side b : {Side::kMinus, Side::kPlus}) {
      if (rel.empty(Side::kMinus, b)) { z.lower = opposite(b); placed = true; break; }  // above h0
      if (rel.empty(Side::kPlus, b)) { z.lower = b; placed = true; break; }            // below h0
    }
    if (!placed) return std::nullopt;
    out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [&](OrientedWall a, OrientedWall b) { return lower_size(ws, a) < lower_size(ws, b); });
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (!precedes(ws, out[i], out[i + 1])) return std::nullopt;
  return out;
}

inline bool is_chain(const Wallspace& ws, const std::vector<WallId>& walls) { return chain_order(ws, walls).has_value(); }

// Pairwise admissibility between consecutive chain elements, where each
// wall may be realised by one of several witnesses. Implementations must be
// symmetric under reversal: admissible(a,i,b,j) == admissible(rev b,j,rev a,i).
class WitnessPredicate {
 public:
  virtual ~WitnessPredicate() = default;
  virtual std::string name() const = 0;
  virtual std::size_t witness_count(WallId h) const = 0;
  // Precondition: precedes(lo, hi).
  virtual bool admissible(OrientedWall lo, std::uint32_t i, OrientedWall hi, std::uint32_t j) const = 0;
  // If a<b<c with (a,b) admissible then (a,c) and symmetrically (b,c) => (a,c)
  // for any witnesses; then consecutive admissibility implies pairwise.
  virtual bool interval_closed() const = 0;
};

class TrivialPredicate final : public WitnessPredicate {
 public:
  std::string name() const override { return "all_chains"; }
  std::size_t witness_count(WallId) const override { return 1; }
  bool admissible(OrientedWall, std::uint32_t, OrientedWall, std::uint32_t) const override { return true; }
  bool interval_closed() const override { return true; }
};

// Adapter for predicates on oriented wall pairs without witnesses.
class WallPairPredicate final : public WitnessPredicate {
 public:
  using Fn = std::function<bool(OrientedWall, OrientedWall)>;
  WallPairPredicate(std::string name, Fn fn, bool interval_closed)
      : name_(std::move(name)), fn_(std::move(fn)), closed_(interval_closed) {}

  std::string name() const override { return name_; }
  std::size_t witness_count(WallId) const override { return 1; }
  bool admissible(OrientedWall lo, std::uint32_t, OrientedWall hi, std::uint32_t) const override { return fn_(lo, hi); }
  bool interval_closed() const override { return closed_; }

 private:
  std::string name_;
  Fn fn_;
  bool closed_;
};

// A member of a chain system with the witness realising each element.
struct MemberChain {
  std::vector<OrientedWall> walls;
  std::vector<std::uint32_t> witnesses;

  std::size_t size() const { return walls.size(); }
  std::vector<WallId> wall_ids() const {
    std::vector<WallId> out;
    for (auto z : walls) out.push_back(z.wall);
    return out;
  }
};

struct SearchLimits {
  std::size_t node_budget = 50'000'000;
};

class ChainSystem {
 public:
  static ChainSystem all_subsets() { return ChainSystem(SystemKind::kAllSubsets); }
  static ChainSystem all_chains() {
    ChainSystem cs(SystemKind::kAllChains);
    cs.predicate_ = std::make_shared<TrivialPredicate>();
    return cs;
  }
  static ChainSystem pairwise(std::shared_ptr<const WitnessPredicate> pred) {
    if (!pred) throw Error(ErrorCode::kInvalidArgument, "null predicate");
    ChainSystem cs(SystemKind::kPairwise);
    cs.predicate_ = std::move(pred);
    return cs;
  }
  // Members are given as wall-id lists; every subset of a member belongs to C.
  static ChainSystem explicit_members(std::size_t wall_count, const std::vector<std::vector<WallId>>& members) {
    ChainSystem cs(SystemKind::kExplicit);
    for (const auto& m : members) {
      Bits b(wall_count);
      for (auto h : m) {
        if (h >= wall_count) throw Error(ErrorCode::kInvalidArgument, "explicit member references wall out of range");
        b.set(h);
      }
      cs.members_.push_back(std::move(b));
    }
    return cs;
  }

  SystemKind kind() const { return kind_; }
  const WitnessPredicate* predicate() const { return predicate_.get(); }
  std::shared_ptr<const WitnessPredicate> predicate_ptr() const { return predicate_; }
  const std::vector<Bits>& members() const { return members_; }

  std::optional<int> declared_m;
  std::optional<int> declared_L;

  bool witnessed() const { return kind_ == SystemKind::kAllChains || kind_ == SystemKind::kPairwise; }

  std::string descriptor() const {
    switch (kind_) {
      case SystemKind::kAllSubsets: return "all_subsets";
      case SystemKind::kAllChains: return "all_chains";
      case SystemKind::kPairwise: return "pairwise:" + predicate_->name();
      case SystemKind::kExplicit: return "explicit";
    }
    return "?";
  }

 private:
  explicit ChainSystem(SystemKind k) : kind_(k) {}

  SystemKind kind_;
  std::shared_ptr<const WitnessPredicate> predicate_;
  std::vector<Bits> members_;
};

// Is this a system of chains on ws (every member a chain)?
inline bool is_chain_system(const ChainSystem& cs, const Wallspace& ws) {
  switch (cs.kind()) {
    case SystemKind::kAllSubsets: {
      // 2^P is a system of chains only when P itself is a chain.
      std::vector<WallId> all(ws.wall_count());
      for (WallId h = 0; h < all.size(); ++h) all[h] = h;
      return is_chain(ws, all);
    }
    case SystemKind::kAllChains:
    case SystemKind::kPairwise: return true;
    case SystemKind::kExplicit:
      for (const auto& m : cs.members())
        if (!is_chain(ws, members_of(m))) return false;
      return true;
  }
  return false;
}

// Walls absent from every explicit member (violating "contains singletons"),
// or walls with no witness for a witnessed system.
inline std::vector<WallId> missing_singletons(const ChainSystem& cs, const Wallspace& ws) {
  std::vector<WallId> out;
  for (WallId h = 0; h < ws.wall_count(); ++h) {
    bool ok = true;
    if (cs.kind() == SystemKind::kExplicit) {
      ok = std::any_of(cs.members().begin(), cs.members().end(), [&](const Bits& m) { return m.test(h); });
    } else if (cs.witnessed()) {
      ok = cs.predicate()->witness_count(h) > 0;
    }
    if (!ok) out.push_back(h);
  }
  return out;
}

namespace detail {

// Does the ordered chain admit a witness assignment with all required
// pairs admissible?
inline std::optional<std::vector<std::uint32_t>> witness_assignment(const WitnessPredicate& pred,
                                                                    const std::vector<OrientedWall>& chain,
                                                                    const SearchLimits& limits = {}) {
  const std::size_t n = chain.size();
  if (n == 0) return std::vector<std::uint32_t>{};
  for (auto z : chain)
    if (pred.witness_count(z.wall) == 0) return std::nullopt;
  if (pred.interval_closed()) {
    // Forward reachability with parent pointers.
    std::vector<std::vector<int>> parent(n);
    std::vector<Bits> reach(n);
    reach[0] = Bits(pred.witness_count(chain[0].wall));
    reach[0].set();
    parent[0].assign(reach[0].size(), -1);
    for (std::size_t t = 1; t < n; ++t) {
      const std::size_t w = pred.witness_count(chain[t].wall);
      reach[t] = Bits(w);
      parent[t].assign(w, -1);
      for (std::uint32_t j = 0; j < w; ++j)
        for (auto i = reach[t - 1].find_first(); i != Bits::npos; i = reach[t - 1].find_next(i))
          if (pred.admissible(chain[t - 1], static_cast<std::uint32_t>(i), chain[t], j)) {
            reach[t].set(j);
            parent[t][j] = static_cast<int>(i);
            break;
          }
      if (reach[t].none()) return std::nullopt;
    }
    std::vector<std::uint32_t> out(n);
    out[n - 1] = static_cast<std::uint32_t>(reach[n - 1].find_first());
    for (std::size_t t = n - 1; t > 0; --t) out[t - 1] = static_cast<std::uint32_t>(parent[t][out[t]]);
    return out;
  }
  // All pairs must be admissible: depth-first over witness choices.
  std::vector<std::uint32_t> pick(n);
  std::size_t nodes = 0;
  std::function<bool(std::size_t)> go = [&](std::size_t t) -> bool {
    if (t == n) return true;
    for (std::uint32_t j = 0; j < pred.witness_count(chain[t].wall); ++j) {
      if (++nodes > limits.node_budget) throw Error(ErrorCode::kSearchCap, "witness search exceeded node budget " + std::to_string(limits.node_budget));
      bool ok = true;
      for (std::size_t s = 0; s < t && ok; ++s) ok = pred.admissible(chain[s], pick[s], chain[t], j);
      if (!ok) continue;
      pick[t] = j;
      if (go(t + 1)) return true;
    }
    return false;
  };
  if (go(0)) return pick;
  return std::nullopt;
}

// Longest member among candidate oriented walls. Candidates may contain both
// orientations of a wall; a chain never uses both. With `top` set, only
// members ending at that candidate count.
inline MemberChain longest_witnessed(const Wallspace& ws, const WitnessPredicate& pred, std::vector<OrientedWall> cand,
                                     const SearchLimits& limits = {}, std::optional<OrientedWall> top = std::nullopt) {
  std::sort(cand.begin(), cand.end(), [&](OrientedWall a, OrientedWall b) {
    auto sa = lower_size(ws, a), sb = lower_size(ws, b);
    return sa != sb ? sa < sb : a < b;
  });
  struct Node {
    std::size_t c;
    std::uint32_t w;
  };
  std::vector<Node> nodes;
  for (std::size_t c = 0; c < cand.size(); ++c)
    for (std::uint32_t w = 0; w < pred.witness_count(cand[c].wall); ++w) nodes.push_back({c, w});
  MemberChain best;
  if (nodes.empty()) return best;
  auto may_end = [&](std::size_t v) { return !top || cand[nodes[v].c] == *top; };

  if (pred.interval_closed()) {
    std::vector<int> len(nodes.size(), 1), par(nodes.size(), -1);
    std::optional<std::size_t> arg;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      for (std::size_t a = 0; a < b; ++a) {
        if (nodes[a].c == nodes[b].c || len[a] + 1 <= len[b]) continue;
        const auto za = cand[nodes[a].c], zb = cand[nodes[b].c];
        if (!precedes(ws, za, zb)) continue;
        if (!pred.admissible(za, nodes[a].w, zb, nodes[b].w)) continue;
        len[b] = len[a] + 1;
        par[b] = static_cast<int>(a);
      }
      if (may_end(b) && (!arg || len[b] > len[*arg])) arg = b;
    }
    if (!arg) return best;
    for (int v = static_cast<int>(*arg); v >= 0; v = par[v]) {
      best.walls.push_back(cand[nodes[v].c]);
      best.witnesses.push_back(nodes[v].w);
    }
    std::reverse(best.walls.begin(), best.walls.end());
    std::reverse(best.witnesses.begin(), best.witnesses.end());
    return best;
  }

  // Branch and bound: every chosen pair must be admissible.
  std::vector<std::size_t> stack;
  std::size_t budget = 0;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (stack.size() > best.size() && may_end(stack.back())) {
      best.walls.clear();
      best.witnesses.clear();
      for (auto v : stack) {
        best.walls.push_back(cand[nodes[v].c]);
        best.witnesses.push_back(nodes[v].w);
      }
    }
    // Bound: distinct remaining candidate walls.
    std::size_t remaining = cand.size() - (from < nodes.size() ? nodes[from].c : cand.size());
    if (stack.size() + remaining <= best.size()) return;
    for (std::size_t v = from; v < nodes.size(); ++v) {
      if (++budget > limits.node_budget) throw Error(ErrorCode::kSearchCap, "chain search exceeded node budget " + std::to_string(limits.node_budget));
      const auto zv = cand[nodes[v].c];
      bool ok = true;
      for (auto u : stack) {
        const auto zu = cand[nodes[u].c];
        if (nodes[u].c == nodes[v].c || !precedes(ws, zu, zv) || !pred.admissible(zu, nodes[u].w, zv, nodes[v].w)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      stack.push_back(v);
      std::size_t next = v + 1;
      while (next < nodes.size() && nodes[next].c == nodes[v].c) ++next;
      go(next);
      stack.pop_back();
    }
  };
  go(0);
  return best;
}

}  // namespace detail

inline bool contains(const ChainSystem& cs, const Wallspace& ws, const std::vector<WallId>& c) {
  for (auto h : c)
    if (h >= ws.wall_count()) throw Error(ErrorCode::kInvalidArgument, "wall id out of range");
  switch (cs.kind()) {
    case SystemKind::kAllSubsets: return true;
    case SystemKind::kExplicit: {
      Bits b = make_bits(ws.wall_count(), c);
      return std::any_of(cs.members().begin(), cs.members().end(), [&](const Bits& m) { return b.is_subset_of(m); });
    }
    case SystemKind::kAllChains:
    case SystemKind::kPairwise: {
      auto order = chain_order(ws, c);
      if (!order) return false;
      return detail::witness_assignment(*cs.predicate(), *order).has_value();
    }
  }
  return false;
}

inline bool contains(const ChainSystem& cs, const Wallspace& ws, const Bits& c) { return contains(cs, ws, members_of(c)); }

// Witnessed membership for an already ordered chain.
inline bool contains_ordered(const ChainSystem& cs, const Wallspace& ws, const std::vector<OrientedWall>& chain) {
  if (!cs.witnessed()) {
    std::vector<WallId> ids;
    for (auto z : chain) ids.push_back(z.wall);
    return contains(cs, ws, ids);
  }
  return detail::witness_assignment(*cs.predicate(), chain).has_value();
}

// Longest member of C inside `allowed`. If `x` is given, walls are oriented
// with their lower side containing x; otherwise both orientations compete.
inline MemberChain longest_member(const ChainSystem& cs, const Wallspace& ws, const Bits& allowed,
                                  const Orientation* x = nullptr, const SearchLimits& limits = {}) {
  MemberChain out;
  switch (cs.kind()) {
    case SystemKind::kAllSubsets:
      for (auto h : members_of(allowed)) out.walls.push_back({h, x ? (*x)[h] : Side::kMinus});
      out.witnesses.assign(out.walls.size(), 0);
      return out;
    case SystemKind::kExplicit: {
      const Bits* arg = nullptr;
      std::size_t best = 0;
      for (const auto& m : cs.members()) {
        std::size_t k = (m & allowed).count();
        if (k > best) { best = k; arg = &m; }
      }
      if (!arg) return out;
      auto ids = members_of(*arg & allowed);
      if (auto order = chain_order(ws, ids)) {
        out.walls = *order;
        if (x && !out.walls.empty() && out.walls.front().lower != (*x)[out.walls.front().wall]) {
          std::reverse(out.walls.begin(), out.walls.end());
          for (auto& z : out.walls) z = reversed(z);
        }
      } else {
        for (auto h : ids) out.walls.push_back({h, x ? (*x)[h] : Side::kMinus});
      }
      out.witnesses.assign(out.walls.size(), 0);
      return out;
    }
    case SystemKind::kAllChains:
    case SystemKind::kPairwise: {
      std::vector<OrientedWall> cand;
      for (auto h : members_of(allowed)) {
        if (x) {
          cand.push_back({h, (*x)[h]});
        } else {
          cand.push_back({h, Side::kMinus});
          cand.push_back({h, Side::kPlus});
        }
      }
      return detail::longest_witnessed(ws, *cs.predicate(), std::move(cand), limits);
    }
  }
  return out;
}

inline MemberChain realizing_chain(const ChainSystem& cs, const Wallspace& ws, const Orientation& x, const Orientation& y,
                                   const SearchLimits& limits = {}) {
  return longest_member(cs, ws, separating_walls(x, y), &x, limits);
}

inline std::size_t dist_C(const ChainSystem& cs, const Wallspace& ws, const Orientation& x, const Orientation& y,
                          const SearchLimits& limits = {}) {
  Bits sep = separating_walls(x, y);
  if (sep.none()) return 0;
  if (cs.kind() == SystemKind::kAllSubsets) return sep.count();
  return realizing_chain(cs, ws, x, y, limits).size();
}

// ---------------------------------------------------------------- gluability

struct GluabilityReport {
  bool pass = true;
  bool exhaustive_all_lengths = false;  // decision procedure, no length cap applied
  std::size_t length_cap = 0;
  std::size_t states = 0;
  std::vector<WallId> c1, c2;  // counterexample, both in chain order
};

namespace detail {

// Candidate glue: remove z[i+1..j-1] from the combined sequence z (c1 then
// c2, 0-based, c1 = z[0..k-1]). Returns all (i,j) pairs allowed by the
// definition with i in [-1, ...] meaning "keep nothing before".
struct GlueOption {
  int i;  // last kept index before the removed block
  int j;  // first kept index after it
};

inline std::vector<GlueOption> glue_options(int k, int n, int m) {
  std::vector<GlueOption> out;
  out.push_back({k - 1, k});  // b empty
  // Nonempty consecutive b inside window [k-m, k+m-1] with |b| <= m.
  const int lo = std::max(0, k - m), hi = std::min(n - 1, k + m - 1);
  for (int s = lo; s <= hi; ++s)
    for (int e = s; e <= hi && e - s + 1 <= m; ++e) out.push_back({s - 1, e + 1});
  return out;
}

}  // namespace detail

// Windowed state of a chain for the gluability decision procedure: the last
// (m+1) oriented walls plus, for each, the set of witnesses reachable by an
// admissible path from the start of the chain.
namespace detail {

struct GlueState {
  std::vector<OrientedWall> window;
  std::vector<Bits> reach;
  int parent = -1;             // predecessor state, -1 for seeds
  std::vector<OrientedWall> seed;  // full chain for seeds
};

inline std::string state_key(const GlueState& s) {
  std::string key;
  for (std::size_t t = 0; t < s.window.size(); ++t) {
    key += std::to_string(s.window[t].wall);
    key += s.window[t].lower == Side::kPlus ? '+' : '-';
    std::string bits;
    boost::to_string(s.reach[t], bits);
    key += bits;
    key += ';';
  }
  return key;
}

inline Bits step_reach(const WitnessPredicate& pred, OrientedWall a, const Bits& ra, OrientedWall b) {
  Bits rb(pred.witness_count(b.wall));
  for (std::uint32_t j = 0; j < rb.size(); ++j)
    for (auto i = ra.find_first(); i != Bits::npos; i = ra.find_next(i))
      if (pred.admissible(a, static_cast<std::uint32_t>(i), b, j)) {
        rb.set(j);
        break;
      }
  return rb;
}

}  // namespace detail

// Decides m-gluability. For witnessed interval-closed systems this is a
// decision procedure over all chain lengths (the relevant information about a
// chain of arbitrary length is captured by its window state). Other chain
// kinds fall back to explicit enumeration of members up to length_cap.
inline GluabilityReport check_gluable(const ChainSystem& cs, const Wallspace& ws, int m, std::size_t length_cap = 12,
                                      std::size_t state_cap = 2'000'000) {
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "m must be non-negative");
  if (!is_chain_system(cs, ws)) throw Error(ErrorCode::kInvalidArgument, "gluability requires a system of chains");
  GluabilityReport rep;
  rep.length_cap = length_cap;
  const auto P = static_cast<WallId>(ws.wall_count());

  std::vector<OrientedWall> oriented;
  for (WallId h = 0; h < P; ++h) {
    oriented.push_back({h, Side::kMinus});
    oriented.push_back({h, Side::kPlus});
  }
  auto oidx = [](OrientedWall z) { return 2 * z.wall + (z.lower == Side::kPlus ? 1 : 0); };
  std::vector<std::vector<OrientedWall>> succ(oriented.size());
  for (auto a : oriented)
    for (auto b : oriented)
      if (precedes(ws, a, b)) succ[oidx(a)].push_back(b);

  const auto W = static_cast<std::size_t>(m) + 1;

  if (cs.witnessed() && cs.predicate()->interval_closed()) {
    const auto& pred = *cs.predicate();
    rep.exhaustive_all_lengths = true;
    std::vector<detail::GlueState> states;
    std::unordered_map<std::string, int> seen;
    std::deque<int> queue;
    auto push = [&](detail::GlueState s) {
      auto key = detail::state_key(s);
      if (seen.count(key)) return;
      if (states.size() >= state_cap) throw Error(ErrorCode::kSearchCap, "gluability state space exceeded cap " + std::to_string(state_cap));
      seen.emplace(std::move(key), static_cast<int>(states.size()));
      queue.push_back(static_cast<int>(states.size()));
      states.push_back(std::move(s));
    };
    // Seeds: members of length exactly m+1.
    std::vector<OrientedWall> path;
    std::vector<Bits> reach;
    std::function<void()> seed = [&] {
      if (path.size() == W) {
        detail::GlueState s;
        s.window = path;
        s.reach = reach;
        s.seed = path;
        push(std::move(s));
        return;
      }
      const auto& nexts = path.empty() ? oriented : succ[oidx(path.back())];
      for (auto z : nexts) {
        Bits r;
        if (path.empty()) {
          r = Bits(pred.witness_count(z.wall));
          r.set();
        } else {
          r = detail::step_reach(pred, path.back(), reach.back(), z);
        }
        if (r.none()) continue;
        path.push_back(z);
        reach.push_back(std::move(r));
        seed();
        path.pop_back();
        reach.pop_back();
      }
    };
    seed();
    while (!queue.empty()) {
      int id = queue.front();
      queue.pop_front();
      const auto win = states[id].window;
      const auto rch = states[id].reach;
      for (auto z : succ[oidx(win.back())]) {
        Bits r = detail::step_reach(pred, win.back(), rch.back(), z);
        if (r.none()) continue;
        detail::GlueState s;
        s.window.assign(win.begin() + 1, win.end());
        s.window.push_back(z);
        s.reach.assign(rch.begin() + 1, rch.end());
        s.reach.push_back(std::move(r));
        s.parent = id;
        push(std::move(s));
      }
    }
    rep.states = states.size();

    auto full_chain = [&](int id) {
      std::vector<int> lineage;
      for (int v = id; v >= 0; v = states[v].parent) lineage.push_back(v);
      std::vector<OrientedWall> chain = states[lineage.back()].seed;
      for (auto it = lineage.rbegin() + 1; it != lineage.rend(); ++it) chain.push_back(states[*it].window.back());
      return chain;
    };

    // Right states are mirror images of left states: reverse the chain and
    // flip orientations; reach sets become backward-reachable sets.
    std::map<OrientedWall, std::vector<int>> by_first_right;  // key: first wall of the mirrored window
    for (int id = 0; id < static_cast<int>(states.size()); ++id) by_first_right[reversed(states[id].window.back())].push_back(id);

    std::vector<OrientedWall> z(2 * W);
    std::vector<Bits> fwd(W), bwd(W);
    for (int lid = 0; lid < static_cast<int>(states.size()); ++lid) {
      const auto& L = states[lid];
      for (auto first : succ[oidx(L.window.back())]) {
        auto it = by_first_right.find(first);
        if (it == by_first_right.end()) continue;
        for (int rid : it->second) {
          const auto& Rs = states[rid];
          for (std::size_t t = 0; t < W; ++t) {
            z[t] = L.window[t];
            fwd[t] = L.reach[t];
            z[W + t] = reversed(Rs.window[W - 1 - t]);
            bwd[t] = Rs.reach[W - 1 - t];  // backward-reachable witnesses of z[W+t]
          }
          // Admissible across the mirror: reversal symmetry makes reach sets
          // of the reversed chain exactly the backward sets here.
          const int k = static_cast<int>(W), n = static_cast<int>(2 * W);
          bool glued = false;
          for (auto opt : detail::glue_options(k, n, m)) {
            // Left anchor p = min(i, k-1) uses fwd; right anchor q = max(j, k) uses bwd.
            int p = std::min(opt.i, k - 1), q = std::max(opt.j, k);
            if (p < 0) {
              // Entire left window removed; impossible when |c1| >= m+1 and |b| <= m.
              continue;
            }
            std::vector<int> kept;
            for (int t = p; t <= q; ++t)
              if (t <= opt.i || t >= opt.j) kept.push_back(t);
            Bits cur = fwd[p];
            for (std::size_t u = 1; u < kept.size() && cur.any(); ++u)
              cur = detail::step_reach(pred, z[kept[u - 1]], cur, z[kept[u]]);
            if ((cur & bwd[q - k]).any()) {
              glued = true;
              break;
            }
          }
          if (!glued) {
            rep.pass = false;
            auto left = full_chain(lid);
            auto right_rev = full_chain(rid);
            for (auto w : left) rep.c1.push_back(w.wall);
            for (auto it2 = right_rev.rbegin(); it2 != right_rev.rend(); ++it2) rep.c2.push_back(it2->wall);
            return rep;
          }
        }
      }
    }
    return rep;
  }

  // Fallback: enumerate oriented members up to length_cap.
  std::vector<std::vector<OrientedWall>> members;
  std::vector<OrientedWall> path;
  std::function<void()> grow = [&] {
    if (path.size() >= W) members.push_back(path);
    if (path.size() == length_cap) return;
    const auto& nexts = path.empty() ? oriented : succ[oidx(path.back())];
    for (auto z : nexts) {
      path.push_back(z);
      if (contains_ordered(cs, ws, path)) grow();
      path.pop_back();
    }
  };
  grow();
  rep.states = members.size();
  for (const auto& c1 : members)
    for (const auto& c2 : members) {
      if (c1.size() + c2.size() > length_cap) continue;
      if (!precedes(ws, c1.back(), c2.front())) continue;
      std::vector<OrientedWall> zz(c1);
      zz.insert(zz.end(), c2.begin(), c2.end());
      const int k = static_cast<int>(c1.size()), n = static_cast<int>(zz.size());
      bool glued = false;
      for (auto opt : detail::glue_options(k, n, m)) {
        std::vector<OrientedWall> kept;
        for (int t = 0; t < n; ++t)
          if (t <= opt.i || t >= opt.j) kept.push_back(zz[t]);
        if (contains_ordered(cs, ws, kept)) {
          glued = true;
          break;
        }
      }
      if (!glued) {
        rep.pass = false;
        for (auto w : c1) rep.c1.push_back(w.wall);
        for (auto w : c2) rep.c2.push_back(w.wall);
        return rep;
      }
    }
  return rep;
}

// ------------------------------------------------------------ L-separation

struct SeparationReport {
  bool pass = true;
  std::size_t observed = 0;          // largest crossing member found
  std::vector<WallId> pair;          // 2-element member attaining it
  std::vector<WallId> crossing_chain;
};

inline Bits crossing_both(const Wallspace& ws, WallId h1, WallId h2) {
  Bits out(ws.wall_count());
  for (WallId h = 0; h < ws.wall_count(); ++h)
    if (ws.crosses(h, h1) && ws.crosses(h, h2)) out.set(h);
  return out;
}

inline SeparationReport check_L_separated(const ChainSystem& cs, const Wallspace& ws, std::size_t L,
                                          const SearchLimits& limits = {}) {
  SeparationReport rep;
  const auto P = static_cast<WallId>(ws.wall_count());
  for (WallId h1 = 0; h1 < P; ++h1)
    for (WallId h2 = h1 + 1; h2 < P; ++h2) {
      if (!contains(cs, ws, std::vector<WallId>{h1, h2})) continue;
      Bits X = crossing_both(ws, h1, h2);
      if (X.none()) continue;
      auto best = longest_member(cs, ws, X, nullptr, limits);
      if (best.size() > rep.observed || rep.pair.empty()) {
        if (best.size() > rep.observed) {
          rep.observed = best.size();
          rep.pair = {h1, h2};
          rep.crossing_chain = best.wall_ids();
        }
      }
    }
  rep.pass = rep.observed <= L;
  return rep;
}

// ---------------------------------------------------------- graded systems

struct GradedLevel {
  int R = 1;
  ChainSystem system = ChainSystem::all_chains();
  int L = 1;
  int m = 0;
  Rational kappa;
  Rational lambda;
};

struct GradedSystem {
  std::vector<GradedLevel> levels;  // R = 1..R_max in order
  Rational Lambda;
  int R_max = 0;
  Rational tail_weight;  // applied to dist at R_max
};

// Weights for curtain gradings: kappa = 1/R^2, lambda = 1/(R^2(3R+9)),
// L = 3R+5, m = 3. The tail beyond R_max is bounded by 1/(6 R_max^2) and
// Lambda covers both the infinite sum and the finite reweighted one.
inline GradedSystem make_curtain_grading(std::vector<ChainSystem> systems) {
  GradedSystem gs;
  gs.R_max = static_cast<int>(systems.size());
  Rational partial = 0;
  for (int R = 1; R <= gs.R_max; ++R) {
    GradedLevel lv;
    lv.R = R;
    lv.system = std::move(systems[R - 1]);
    lv.L = 3 * R + 5;
    lv.m = 3;
    lv.kappa = Rational(1, R * R);
    lv.lambda = Rational(1, R * R * (3 * R + 9));
    partial += Rational(1, R * R);
    gs.levels.push_back(std::move(lv));
  }
  if (gs.R_max == 0) {
    gs.Lambda = 0;
    gs.tail_weight = 0;
    return gs;
  }
  const int N = gs.R_max;
  gs.tail_weight = Rational(1, 6 * N * N);
  Rational tail_infinite(1, N);                    // sum_{R>N} 1/R^2 < 1/N
  Rational tail_finite = gs.tail_weight * (3 * N + 9);  // reweighted last level
  gs.Lambda = partial + std::max(tail_infinite, tail_finite);
  return gs;
}

// Generic weights; Lambda = sum lambda_R (L_R+m_R+1) + tail * (L_N+m_N+1).
inline GradedSystem make_graded(std::vector<GradedLevel> levels, Rational tail_weight) {
  GradedSystem gs;
  gs.levels = std::move(levels);
  gs.R_max = static_cast<int>(gs.levels.size());
  gs.tail_weight = tail_weight;
  Rational sum = 0;
  for (const auto& lv : gs.levels) {
    if (lv.lambda > lv.kappa) throw Error(ErrorCode::kInvalidArgument, "lambda_R must not exceed kappa_R");
    sum += lv.lambda * (lv.L + lv.m + 1);
  }
  if (!gs.levels.empty()) sum += tail_weight * (gs.levels.back().L + gs.levels.back().m + 1);
  gs.Lambda = sum;
  return gs;
}

// Consecutive levels sharing a predicate object define the same system.
inline bool same_system(const ChainSystem& a, const ChainSystem& b) {
  return a.kind() == b.kind() && a.kind() == SystemKind::kPairwise && a.predicate() == b.predicate();
}

// Per-level distances, reused by callers that evaluate many weightings.
inline std::vector<std::size_t> level_dists(const GradedSystem& gs, const Wallspace& ws, const Orientation& x,
                                            const Orientation& y, const SearchLimits& limits = {}) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < gs.levels.size(); ++i) {
    if (i > 0 && same_system(gs.levels[i].system, gs.levels[i - 1].system)) out.push_back(out.back());
    else out.push_back(dist_C(gs.levels[i].system, ws, x, y, limits));
  }
  return out;
}

inline Rational graded_from_levels(const GradedSystem& gs, const std::vector<std::size_t>& d);

inline Rational graded_dist(const GradedSystem& gs, const Wallspace& ws, const Orientation& x, const Orientation& y,
                            const SearchLimits& limits = {}) {
  return graded_from_levels(gs, level_dists(gs, ws, x, y, limits));
}

inline Rational graded_from_levels(const GradedSystem& gs, const std::vector<std::size_t>& d) {
  Rational total = 0;
  for (std::size_t i = 0; i < gs.levels.size(); ++i) total += gs.levels[i].lambda * static_cast<long long>(d[i]);
  if (!d.empty()) total += gs.tail_weight * static_cast<long long>(d.back());
  return total;
}

}  // namespace walldual
