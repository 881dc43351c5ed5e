#pragma once

// JSON and text formats. Keys are emitted in sorted order (nlohmann's
// default object type) and rationals as "p/q" strings.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "walldual/chain_system.hpp"
#include "walldual/curtains.hpp"
#include "walldual/dual_space.hpp"
#include "walldual/metric_graph.hpp"
#include "walldual/wallspace.hpp"

namespace walldual {

using Json = nlohmann::json;

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] inline void schema_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline std::size_t as_index(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema_error(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace detail

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    // Drop nlohmann's own "[json.exception...] parse error at ...:" prefix.
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos)
      if (auto colon = msg.find(": ", pos); colon != std::string::npos) msg = msg.substr(colon + 2);
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json rational_json(const Rational& q) { return to_string(q); }

// ----------------------------------------------------------------- wallspace

inline Json wallspace_to_json(const Wallspace& ws) {
  Json walls = Json::array();
  for (const auto& w : ws.walls()) {
    Json side = Json::array();
    for (auto p : members_of(w.minus_side)) side.push_back(p);
    walls.push_back(std::move(side));
  }
  return Json{{"points", ws.labels()}, {"walls", std::move(walls)}};
}

inline Wallspace wallspace_from_json(const Json& j) {
  const Json& pts = detail::require(j, "points");
  const Json& walls = detail::require(j, "walls");
  if (!pts.is_array()) detail::schema_error("\"points\" must be an array");
  if (!walls.is_array()) detail::schema_error("\"walls\" must be an array");
  std::vector<std::string> labels;
  for (const auto& p : pts) {
    if (p.is_string()) labels.push_back(p.get<std::string>());
    else if (p.is_number_integer()) labels.push_back(std::to_string(p.get<long long>()));
    else detail::schema_error("point labels must be strings or integers");
  }
  std::vector<std::vector<PointId>> minus;
  for (const auto& w : walls) {
    if (!w.is_array()) detail::schema_error("each wall must be an array of point indices");
    std::vector<PointId> side;
    for (const auto& p : w) side.push_back(static_cast<PointId>(detail::as_index(p, "point index")));
    minus.push_back(std::move(side));
  }
  return Wallspace(std::move(labels), minus);
}

inline Wallspace parse_wallspace(const std::string& text) { return wallspace_from_json(parse_json(text)); }

// --------------------------------------------------------------------- graph

inline Json graph_to_json(const MetricGraph& g) {
  Json edges = Json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  return Json{{"vertices", g.labels()}, {"edges", std::move(edges)}};
}

// {"vertices": n | [labels], "edges": [[u,v],...]}
inline MetricGraph graph_from_json(const Json& j) {
  const Json& v = detail::require(j, "vertices");
  std::vector<std::string> labels;
  std::size_t n = 0;
  if (v.is_array()) {
    for (const auto& l : v) {
      if (!l.is_string() && !l.is_number_integer()) detail::schema_error("vertex labels must be strings or integers");
      labels.push_back(l.is_string() ? l.get<std::string>() : std::to_string(l.get<long long>()));
    }
    n = labels.size();
  } else {
    n = detail::as_index(v, "\"vertices\"");
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : detail::require(j, "edges")) {
    if (!e.is_array() || e.size() != 2) detail::schema_error("each edge must be a pair of vertex indices");
    edges.emplace_back(static_cast<VertexId>(detail::as_index(e[0], "edge endpoint")),
                       static_cast<VertexId>(detail::as_index(e[1], "edge endpoint")));
  }
  return MetricGraph(n, edges, std::move(labels));
}

// One "u v" pair of labels per line; '#' starts a comment. Vertices are
// numbered in order of first appearance.
inline MetricGraph parse_edge_list(const std::string& text) {
  std::map<std::string, VertexId> id;
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  auto intern = [&](const std::string& s) {
    auto [it, fresh] = id.emplace(s, static_cast<VertexId>(labels.size()));
    if (fresh) labels.push_back(s);
    return it->second;
  };
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::vector<std::pair<std::string, std::size_t>> tok;
    for (std::size_t i = 0; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tok.emplace_back(line.substr(i, j - i), i + 1);
      i = j;
    }
    if (tok.empty()) continue;
    if (tok.size() != 2) {
      const std::size_t col = tok.size() > 2 ? tok[2].second : line.size() + 1;
      throw Error(ErrorCode::kParse, "line " + std::to_string(lineno) + ", column " + std::to_string(col) +
                                         ": expected exactly two vertex labels");
    }
    const VertexId a = intern(tok[0].first);
    const VertexId b = intern(tok[1].first);
    edges.emplace_back(a, b);
  }
  if (labels.empty()) throw Error(ErrorCode::kParse, "edge list is empty");
  const std::size_t n = labels.size();
  return MetricGraph(n, edges, std::move(labels));
}

// JSON if the first non-space character is '{', else an edge list.
inline MetricGraph parse_graph(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return graph_from_json(parse_json(text));
  return parse_edge_list(text);
}

// ------------------------------------------------------------- descriptors

struct SystemDescriptor {
  std::string kind = "all_chains";  // all_subsets | all_chains | explicit | ball_separated
  std::vector<std::vector<WallId>> members;  // explicit
  std::uint32_t R = 1;                        // ball_separated
};

inline SystemDescriptor descriptor_from_json(const Json& j) {
  SystemDescriptor d;
  d.kind = detail::require(j, "kind").get<std::string>();
  if (d.kind == "explicit") {
    for (const auto& m : detail::require(j, "members")) {
      std::vector<WallId> ids;
      for (const auto& h : m) ids.push_back(static_cast<WallId>(detail::as_index(h, "wall index")));
      d.members.push_back(std::move(ids));
    }
  } else if (d.kind == "ball_separated") {
    d.R = static_cast<std::uint32_t>(detail::as_index(detail::require(j, "R"), "\"R\""));
    if (d.R == 0) detail::schema_error("\"R\" must be positive");
  } else if (d.kind != "all_subsets" && d.kind != "all_chains") {
    detail::schema_error("unknown system kind \"" + d.kind + "\"");
  }
  return d;
}

// Accepts a bare kind name or a JSON descriptor.
inline SystemDescriptor parse_descriptor(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return descriptor_from_json(parse_json(text));
  const auto last = text.find_last_not_of(" \t\r\n");
  return descriptor_from_json(Json{{"kind", first == std::string::npos ? std::string() : text.substr(first, last - first + 1)}});
}

inline Json descriptor_to_json(const SystemDescriptor& d) {
  Json j{{"kind", d.kind}};
  if (d.kind == "explicit") j["members"] = d.members;
  if (d.kind == "ball_separated") j["R"] = d.R;
  return j;
}

// Systems that only need the wallspace.
inline ChainSystem make_system(const SystemDescriptor& d, const Wallspace& ws) {
  if (d.kind == "all_subsets") return ChainSystem::all_subsets();
  if (d.kind == "all_chains") return ChainSystem::all_chains();
  if (d.kind == "explicit") return ChainSystem::explicit_members(ws.wall_count(), d.members);
  throw Error(ErrorCode::kInvalidArgument, "system \"" + d.kind + "\" needs a graph input");
}

// ---------------------------------------------------------------- dual space

inline Json dual_to_json(const DualSpace& d, bool with_metric = true) {
  Json verts = Json::array();
  for (const auto& o : d.vertices) verts.push_back(o.str());
  Json edges = Json::array();
  for (auto [a, b] : d.edges) edges.push_back({a, b});
  Json j{{"system", d.system.descriptor()},
         {"wallspace", wallspace_to_json(*d.ws)},
         {"vertices", std::move(verts)},
         {"edges", std::move(edges)},
         {"principal", d.principal},
         {"diameter", d.diameter()}};
  if (with_metric) {
    Json rows = Json::array();
    for (VertexId a = 0; a < d.size(); ++a) {
      Json row = Json::array();
      for (VertexId b = 0; b < d.size(); ++b) row.push_back(d.dist(a, b));
      rows.push_back(std::move(row));
    }
    j["metric"] = std::move(rows);
  }
  return j;
}

// --------------------------------------------------------------- curtains

inline Json curtain_to_json(const MetricGraph& g, const Curtain& c) {
  auto names = [&](const Bits& b) {
    Json a = Json::array();
    for (auto v : members_of(b)) a.push_back(g.labels()[v]);
    return a;
  };
  Json path = Json::array();
  for (auto v : c.dual_geodesic) path.push_back(g.labels()[v]);
  return Json{{"dual_geodesic", std::move(path)},
              {"D", c.D},
              {"interval", {c.start, c.start + 10 * c.D}},
              {"minus", names(c.minus)},
              {"membrane", names(c.membrane)},
              {"plus", names(c.plus)},
              {"thickness", c.thickness}};
}

// ------------------------------------------------------------------ reports

// {name, bound, observed, pass, witnesses, seed, caps}
inline Json make_report(const std::string& name, Json bound, Json observed, bool pass, Json witnesses = Json::object(),
                        Json seed = nullptr, Json caps = Json::object()) {
  return Json{{"name", name},         {"bound", std::move(bound)}, {"observed", std::move(observed)}, {"pass", pass},
              {"witnesses", std::move(witnesses)}, {"seed", std::move(seed)}, {"caps", std::move(caps)}};
}

}  // namespace walldual
