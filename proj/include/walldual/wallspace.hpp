#pragma once

// Finite sets with walls: bipartitions of a point set, their pairwise
// crossing/nesting calculus, orientations, filters and the majority-vote
// median on ultrafilters.

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "walldual/common.hpp"

namespace walldual {

enum class Side : std::uint8_t { kMinus = 0, kPlus = 1 };

inline Side opposite(Side s) { return s == Side::kMinus ? Side::kPlus : Side::kMinus; }
inline int index_of(Side s) { return static_cast<int>(s); }

struct Wall {
  WallId id = 0;
  Bits minus_side;
  Bits plus_side;
};

enum class Relation : std::uint8_t { kCross, kNested, kDisjointFacing, kEqual };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::kCross: return "CROSS";
    case Relation::kNested: return "NESTED";
    case Relation::kDisjointFacing: return "DISJOINT_FACING";
    case Relation::kEqual: return "EQUAL";
  }
  return "?";
}

// Quarterspace emptiness for an ordered pair (h, k): bit 2a+b is set when
// side a of h meets side b of k in no point.
struct PairRelation {
  Relation kind = Relation::kCross;
  std::uint8_t empty_mask = 0;

  bool empty(Side a, Side b) const { return (empty_mask >> (2 * index_of(a) + index_of(b))) & 1U; }
  // Halfspace a of h is contained in halfspace b of k.
  bool included(Side a, Side b) const { return empty(a, opposite(b)); }
};

// Total sign assignment on walls; a set bit selects the plus side.
class Orientation {
 public:
  Orientation() = default;
  explicit Orientation(std::size_t wall_count) : signs_(wall_count) {}
  explicit Orientation(Bits signs) : signs_(std::move(signs)) {}

  std::size_t size() const { return signs_.size(); }
  Side operator[](WallId h) const { return signs_.test(h) ? Side::kPlus : Side::kMinus; }
  void set(WallId h, Side s) { signs_.set(h, s == Side::kPlus); }
  void flip(WallId h) { signs_.flip(h); }
  const Bits& bits() const { return signs_; }

  friend bool operator==(const Orientation& a, const Orientation& b) { return a.signs_ == b.signs_; }
  friend bool operator!=(const Orientation& a, const Orientation& b) { return !(a == b); }
  friend bool operator<(const Orientation& a, const Orientation& b) { return a.signs_ < b.signs_; }

  // "+-+..." with one character per wall, wall 0 first.
  std::string str() const {
    std::string s(signs_.size(), '-');
    for (std::size_t i = 0; i < signs_.size(); ++i)
      if (signs_.test(i)) s[i] = '+';
    return s;
  }

  static Orientation parse(const std::string& s) {
    Orientation o(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '+') o.signs_.set(i);
      else if (s[i] != '-') throw Error(ErrorCode::kParse, "orientation string must use '+' and '-'");
    }
    return o;
  }

 private:
  Bits signs_;
};

struct OrientationHash {
  std::size_t operator()(const Orientation& o) const noexcept { return BitsHash{}(o.bits()); }
};

// Partial orientation: signs are meaningful only on support.
struct Filter {
  Bits support;
  Bits signs;

  explicit Filter(std::size_t wall_count = 0) : support(wall_count), signs(wall_count) {}

  void fix(WallId h, Side s) {
    support.set(h);
    signs.set(h, s == Side::kPlus);
  }
  bool fixed(WallId h) const { return support.test(h); }
  Side operator[](WallId h) const { return signs.test(h) ? Side::kPlus : Side::kMinus; }
};

class Wallspace {
 public:
  Wallspace() = default;

  // minus_sides[i] lists the points on the minus side of wall i.
  Wallspace(std::vector<std::string> labels, const std::vector<std::vector<PointId>>& minus_sides)
      : labels_(std::move(labels)) {
    std::vector<Bits> sides;
    sides.reserve(minus_sides.size());
    for (const auto& m : minus_sides) {
      Bits b(labels_.size());
      for (auto p : m) {
        if (p >= labels_.size()) throw Error(ErrorCode::kStructural, "wall references point " + std::to_string(p) + " out of range");
        b.set(p);
      }
      sides.push_back(std::move(b));
    }
    init(std::move(sides));
  }

  Wallspace(std::size_t point_count, std::vector<Bits> minus_sides) {
    labels_.reserve(point_count);
    for (std::size_t i = 0; i < point_count; ++i) labels_.push_back(std::to_string(i));
    init(std::move(minus_sides));
  }

  Wallspace(std::vector<std::string> labels, std::vector<Bits> minus_sides) : labels_(std::move(labels)) {
    init(std::move(minus_sides));
  }

  std::size_t point_count() const { return labels_.size(); }
  std::size_t wall_count() const { return walls_.size(); }
  const Wall& wall(WallId h) const { return walls_[h]; }
  const std::vector<Wall>& walls() const { return walls_; }
  const std::string& label(PointId p) const { return labels_[p]; }
  const std::vector<std::string>& labels() const { return labels_; }

  const Bits& halfspace(WallId h, Side s) const { return s == Side::kMinus ? walls_[h].minus_side : walls_[h].plus_side; }
  Side side_of(WallId h, PointId p) const { return walls_[h].plus_side.test(p) ? Side::kPlus : Side::kMinus; }

  const PairRelation& relation(WallId h, WallId k) const { return relations_[h * walls_.size() + k]; }
  bool crosses(WallId h, WallId k) const { return h != k && relation(h, k).kind == Relation::kCross; }
  // Halfspace (h, a) is contained in halfspace (k, b).
  bool included(WallId h, Side a, WallId k, Side b) const {
    if (h == k) return a == b;
    return relation(h, k).included(a, b);
  }
  bool disjoint(WallId h, Side a, WallId k, Side b) const {
    if (h == k) return a != b;
    return relation(h, k).empty(a, b);
  }

  // Wall with the given bipartition, if present (either side may be passed).
  std::optional<WallId> find_wall(const Bits& side) const {
    auto it = index_.find(canonical(side));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Wallspace& a, const Wallspace& b) {
    if (a.labels_ != b.labels_ || a.walls_.size() != b.walls_.size()) return false;
    for (std::size_t i = 0; i < a.walls_.size(); ++i)
      if (a.walls_[i].minus_side != b.walls_[i].minus_side) return false;
    return true;
  }

 private:
  Bits canonical(const Bits& side) const {
    if (side.size() > 0 && !side.test(0)) return ~side;
    return side;
  }

  void init(std::vector<Bits> minus_sides) {
    const std::size_t n = labels_.size();
    walls_.clear();
    walls_.reserve(minus_sides.size());
    std::unordered_map<Bits, std::vector<WallId>, BitsHash> seen;
    for (std::size_t i = 0; i < minus_sides.size(); ++i) {
      Bits minus = std::move(minus_sides[i]);
      if (minus.size() != n) throw Error(ErrorCode::kStructural, "wall " + std::to_string(i) + " has wrong universe size");
      Bits plus = ~minus;
      if (minus.none() || plus.none())
        throw Error(ErrorCode::kStructural, "wall " + std::to_string(i) + " has an empty halfspace");
      seen[canonical(minus)].push_back(static_cast<WallId>(i));
      walls_.push_back(Wall{static_cast<WallId>(i), std::move(minus), std::move(plus)});
    }
    std::ostringstream dup;
    for (const auto& [key, ids] : seen) {
      if (ids.size() < 2) continue;
      dup << " {";
      for (std::size_t j = 0; j < ids.size(); ++j) dup << (j ? "," : "") << ids[j];
      dup << "}";
    }
    if (!dup.str().empty()) throw Error(ErrorCode::kStructural, "duplicate bipartitions among walls" + dup.str());
    index_.clear();
    for (const auto& [key, ids] : seen) index_.emplace(key, ids.front());

    const std::size_t m = walls_.size();
    relations_.assign(m * m, PairRelation{});
    for (std::size_t h = 0; h < m; ++h) {
      for (std::size_t k = 0; k < m; ++k) {
        std::uint8_t mask = 0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const Bits& ha = a ? walls_[h].plus_side : walls_[h].minus_side;
            const Bits& kb = b ? walls_[k].plus_side : walls_[k].minus_side;
            if (!ha.intersects(kb)) mask |= static_cast<std::uint8_t>(1U << (2 * a + b));
          }
        PairRelation rel;
        rel.empty_mask = mask;
        int empties = __builtin_popcount(mask);
        if (empties == 0) rel.kind = Relation::kCross;
        else if (empties >= 2) rel.kind = Relation::kEqual;
        else if (mask & 0b1001) rel.kind = Relation::kDisjointFacing;  // minus∩minus or plus∩plus empty
        else rel.kind = Relation::kNested;
        relations_[h * m + k] = rel;
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<Wall> walls_;
  std::vector<PairRelation> relations_;
  std::unordered_map<Bits, WallId, BitsHash> index_;
};

inline PairRelation classify_pair(const Wallspace& ws, WallId h, WallId k) {
  if (h == k) throw Error(ErrorCode::kInvalidArgument, "classify_pair requires distinct walls");
  const auto& rel = ws.relation(h, k);
  if (rel.kind == Relation::kEqual) throw Error(ErrorCode::kStructural, "walls " + std::to_string(h) + " and " + std::to_string(k) + " are identical bipartitions");
  return rel;
}

inline Orientation principal_ultrafilter(const Wallspace& ws, PointId s) {
  if (s >= ws.point_count()) throw Error(ErrorCode::kInvalidArgument, "point out of range");
  Orientation o(ws.wall_count());
  for (WallId h = 0; h < ws.wall_count(); ++h) o.set(h, ws.side_of(h, s));
  return o;
}

// First pair of walls whose chosen halfspaces are disjoint, if any.
inline std::optional<std::pair<WallId, WallId>> find_inconsistency(const Wallspace& ws, const Orientation& o) {
  const auto m = static_cast<WallId>(ws.wall_count());
  for (WallId h = 0; h < m; ++h)
    for (WallId k = h + 1; k < m; ++k)
      if (ws.disjoint(h, o[h], k, o[k])) return std::make_pair(h, k);
  return std::nullopt;
}

inline bool is_consistent(const Wallspace& ws, const Orientation& o) {
  if (o.size() != ws.wall_count()) throw Error(ErrorCode::kInvalidArgument, "orientation size mismatch");
  return !find_inconsistency(ws, o).has_value();
}

inline bool is_filter(const Wallspace& ws, const Filter& f) {
  auto ids = members_of(f.support);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (ws.disjoint(ids[i], f[ids[i]], ids[j], f[ids[j]])) return false;
  return true;
}

// Greedy extension in ascending wall order, preferring the minus side.
// The partial assignment stays pairwise-intersecting at every step: if both
// sides of h missed some fixed halfspace, those two fixed halfspaces would
// lie in opposite sides of h and be disjoint.
inline Orientation extend_filter(const Wallspace& ws, const Filter& f) {
  if (f.support.size() != ws.wall_count()) throw Error(ErrorCode::kInvalidArgument, "filter size mismatch");
  if (!is_filter(ws, f)) throw Error(ErrorCode::kInputNotFilter, "chosen halfspaces are not pairwise intersecting");
  Orientation o(ws.wall_count());
  std::vector<WallId> fixed = members_of(f.support);
  for (auto h : fixed) o.set(h, f[h]);
  for (WallId h = 0; h < ws.wall_count(); ++h) {
    if (f.fixed(h)) continue;
    Side choice = Side::kMinus;
    for (Side s : {Side::kMinus, Side::kPlus}) {
      bool ok = true;
      for (auto k : fixed)
        if (ws.disjoint(h, s, k, o[k])) { ok = false; break; }
      if (ok) { choice = s; break; }
    }
    o.set(h, choice);
    fixed.push_back(h);
  }
  return o;
}

inline Bits separating_walls(const Orientation& x, const Orientation& y) { return x.bits() ^ y.bits(); }

inline Orientation median(const Orientation& x, const Orientation& y, const Orientation& z) {
  const Bits& a = x.bits();
  const Bits& b = y.bits();
  const Bits& c = z.bits();
  return Orientation((a & b) | (b & c) | (a & c));
}

}  // namespace walldual
