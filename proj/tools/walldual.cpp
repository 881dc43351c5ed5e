// walldual: build dual spaces of finite wallspaces and check their bounds.
//
// Exit codes: 0 pass, 1 bound violated, 2 input error, 3 cap exceeded.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "walldual/walldual.hpp"

using namespace walldual;

namespace {

constexpr int kExitPass = 0, kExitViolated = 1, kExitInput = 2, kExitCap = 3;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kSearchCap:
    case ErrorCode::kStateExplosion: return kExitCap;
    case ErrorCode::kNonTermination: return kExitViolated;
    default: return kExitInput;
  }
}

struct Options {
  std::string input;
  bool graph = false;
  std::vector<std::uint32_t> D{1};
  std::string system = "all_chains";
  std::optional<std::uint32_t> R_max;
  std::size_t vertex_cap = std::size_t{1} << 18;
  std::size_t chain_cap = 12;
  std::size_t family_cap = 4;
  std::uint64_t quadruple_cap = 20'000'000;
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::optional<int> L, m;
  std::string output;
};

void add_input_options(CLI::App* app, Options& o) {
  app->add_option("-i,--input", o.input, "wallspace JSON, or a graph with --graph")->required();
  app->add_flag("--graph", o.graph, "input is a graph (edge list or JSON); walls come from curtains");
  app->add_option("--D", o.D, "contraction constants used to find curtains");
  app->add_option("-s,--system", o.system, "all_subsets | all_chains | ball_separated | JSON descriptor");
  app->add_option("--R-max", o.R_max, "largest grading level for graph input (default: graph diameter)");
  app->add_option("--vertex-cap", o.vertex_cap, "maximum dual vertices");
  app->add_option("-o,--output", o.output, "write JSON here instead of stdout");
}

void add_check_options(CLI::App* app, Options& o) {
  app->add_option("--chain-cap", o.chain_cap, "chain length cap for gluability");
  app->add_option("--family-cap", o.family_cap, "ball family size cap");
  app->add_option("--quadruple-cap", o.quadruple_cap, "four-point quadruple budget before sampling");
  app->add_option("--samples", o.samples, "sampled quadruples or pairs");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--L", o.L, "separation constant (default: declared or measured)");
  app->add_option("--m", o.m, "gluability constant (default: declared or 0)");
}

struct Loaded {
  std::optional<MetricGraph> graph;
  std::optional<CurtainModel> model;
  std::shared_ptr<const Wallspace> ws;
  SystemDescriptor desc;
  ChainSystem cs = ChainSystem::all_chains();
};

Loaded load(const Options& o) {
  Loaded l;
  const std::string text = read_file(o.input);
  l.desc = parse_descriptor(o.system);
  if (o.graph) {
    l.graph = parse_graph(text);
    CurtainOptions copt;
    copt.D_values = o.D;
    auto cw = build_curtains(*l.graph, copt);
    std::uint32_t rmax = o.R_max.value_or(std::max<std::uint32_t>(1, l.graph->diameter()));
    if (l.desc.kind == "ball_separated") rmax = std::max(rmax, l.desc.R);
    l.model = assemble_graded(cw, rmax);
    l.ws = l.model->cw->walls;
    if (l.desc.kind == "ball_separated") l.cs = l.model->graded.levels[l.desc.R - 1].system;
    else l.cs = make_system(l.desc, *l.ws);
  } else {
    if (l.desc.kind == "ball_separated") throw Error(ErrorCode::kInvalidArgument, "ball_separated needs --graph input");
    l.ws = std::make_shared<const Wallspace>(parse_wallspace(text));
    l.cs = make_system(l.desc, *l.ws);
  }
  return l;
}

DualSpace build_dual(const Loaded& l, const Options& o) {
  DualOptions dopt;
  dopt.vertex_cap = o.vertex_cap;
  return enumerate_dual(*l.ws, l.cs, dopt);
}

void emit(const Options& o, const Json& j) {
  if (o.output.empty()) std::cout << dump(j);
  else write_file(o.output, dump(j));
}

PointId point_by_label(const Wallspace& ws, const std::string& label) {
  for (PointId p = 0; p < ws.point_count(); ++p)
    if (ws.label(p) == label) return p;
  throw Error(ErrorCode::kInvalidArgument, "no point labelled \"" + label + "\"");
}

std::vector<VertexId> principal_vertices(const DualSpace& d) {
  std::vector<VertexId> s = d.principal;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

int resolved_m(const Loaded& l, const Options& o) { return o.m.value_or(l.cs.declared_m.value_or(0)); }

std::size_t resolved_L(const Loaded& l, const Options& o) {
  if (o.L) return static_cast<std::size_t>(*o.L);
  if (l.cs.declared_L) return static_cast<std::size_t>(*l.cs.declared_L);
  return check_L_separated(l.cs, *l.ws, SIZE_MAX).observed;
}

Json walls_json(const std::vector<WallId>& w) { return Json(w); }

// ------------------------------------------------------------------ checks

const std::vector<std::string> kCheckNames = {"median_axioms", "median_graph", "helly",          "four_point",          "gluable",
                                              "L_separated",   "rough_geodesic", "bicombing",           "coarse_injectivity",
                                              "coarse_density", "gate",          "graded_four_point",   "crossing_bound"};

Json run_check(const std::string& name, const Loaded& l, const DualSpace& d, const Options& o) {
  const Wallspace& ws = *l.ws;
  if (name == "median_axioms" || name == "median_graph") {
    auto r = name == "median_axioms" ? verify_median_axioms(d, 64, 100'000, o.seed) : verify_median_graph(d, 512, 200'000, o.seed);
    Json w = Json::object();
    if (!r.pass) w = {{"triple", r.witness}, {"reason", r.reason}};
    return make_report(name, name == "median_axioms" ? "median algebra" : "median graph", Json{{"triples", r.triples}}, r.pass,
                       w, o.seed, {{"exhaustive", r.exhaustive}});
  }
  if (name == "helly") {
    auto r = verify_helly(d, o.family_cap < 5 ? 5 : o.family_cap, 400, 200'000, o.seed);
    Json w = Json::object();
    if (!r.pass) {
      Json fam = Json::array();
      for (auto b : r.family) fam.push_back({{"center", d.vertices[b.center].str()}, {"radius", b.radius}});
      w = {{"triple", r.triple}, {"family", fam}};
    }
    return make_report(name, "pairwise-intersecting balls meet", Json{{"triples", r.triples}, {"geodesic", r.geodesic}},
                       r.pass, w, o.seed, {{"family_cap", r.family_cap}, {"exhaustive", r.exhaustive}});
  }
  if (name == "four_point") {
    const auto L = resolved_L(l, o);
    const int m = resolved_m(l, o);
    auto r = four_point_delta(d, o.quadruple_cap, o.seed, four_point_bound(L, m));
    return make_report(name, rational_json(r.bound), rational_json(r.delta), r.pass,
                       {{"quadruple", r.worst_quadruple}, {"L", L}, {"m", m}}, o.seed,
                       {{"quadruples", r.quadruple_count}, {"exhaustive", r.exhaustive}});
  }
  if (name == "gluable") {
    const int m = resolved_m(l, o);
    auto r = check_gluable(l.cs, ws, m, o.chain_cap);
    Json w = Json::object();
    if (!r.pass) w = {{"c1", walls_json(r.c1)}, {"c2", walls_json(r.c2)}};
    return make_report(name, m, r.pass ? Json("glued") : Json("counterexample"), r.pass, w, nullptr,
                       {{"length_cap", r.length_cap}, {"exhaustive_all_lengths", r.exhaustive_all_lengths}, {"states", r.states}});
  }
  if (name == "L_separated") {
    const auto L = resolved_L(l, o);
    auto r = check_L_separated(l.cs, ws, L);
    return make_report(name, L, r.observed, r.pass, {{"pair", walls_json(r.pair)}, {"chain", walls_json(r.crossing_chain)}});
  }
  if (name == "rough_geodesic") {
    const int m = resolved_m(l, o);
    std::vector<VertexId> pts;
    if (d.size() <= 64)
      for (VertexId v = 0; v < d.size(); ++v) pts.push_back(v);
    else
      pts = principal_vertices(d);
    std::size_t pairs = 0, worst_gap = 0;
    Json w = Json::object();
    bool pass = true;
    for (auto a : pts)
      for (auto b : pts) {
        if (a == b) continue;
        auto p = normal_wall_path(d, d.vertices[a], d.vertices[b]);
        auto r = check_rough_geodesic(d, p, m);
        ++pairs;
        worst_gap = std::max(worst_gap, r.max_gap_defect);
        if (!r.pass && pass) {
          pass = false;
          w = {{"x", d.vertices[a].str()}, {"y", d.vertices[b].str()}, {"violated", r.violated}};
        }
      }
    return make_report(name, Json{{"m", m}, {"step_gap", 3 * m}}, Json{{"max_gap_defect", worst_gap}, {"pairs", pairs}},
                       pass, w, nullptr, {{"all_vertices", d.size() <= 64}});
  }
  if (name == "bicombing") {
    const int m = resolved_m(l, o);
    auto q = sample_quadruples(d.size(), o.samples, o.seed);
    auto r = check_bicombing(d, q, m);
    return make_report(name, 3 * m, r.max_excess, r.pass, {{"quadruple", r.worst}, {"r", r.worst_r}}, o.seed,
                       {{"quadruples", r.quadruples}});
  }
  if (name == "coarse_injectivity") {
    const int m = resolved_m(l, o);
    auto r = check_coarse_injectivity(d, m, o.family_cap, 200'000'000, 200'000, o.seed);
    Json fam = Json::array();
    for (auto b : r.worst) fam.push_back({{"center", d.vertices[b.center].str()}, {"radius", b.radius}});
    return make_report(name, rational_json(r.bound), rational_json(r.observed_slack), r.pass,
                       {{"family", fam}, {"doubled_radii", !r.integer_radii}}, o.seed,
                       {{"family_cap", r.family_cap}, {"families", r.families}, {"exhaustive", r.exhaustive}});
  }
  if (name == "coarse_density") {
    const auto L = resolved_L(l, o);
    const int m = resolved_m(l, o);
    auto r = check_coarse_density(d, principal_vertices(d), L, m);
    return make_report(name, r.bound, r.observed, r.pass, {{"farthest", d.vertices[r.farthest].str()}, {"k", r.k}});
  }
  if (name == "gate") {
    auto r = check_gate_calculus(d, 200, o.seed);
    return make_report(name, "1-Lipschitz, idempotent, median formula", Json{{"instances", r.instances}, {"pairs", r.pairs}},
                       r.pass, r.pass ? Json::object() : Json{{"failure", r.failure}}, o.seed);
  }
  if (name == "graded_four_point" || name == "crossing_bound") {
    if (!l.model) throw Error(ErrorCode::kInvalidArgument, name + " needs --graph input");
    if (name == "crossing_bound") {
      const std::uint32_t R = l.desc.kind == "ball_separated" ? l.desc.R : 1;
      auto r = check_crossing_bound(*l.model->cw, *l.model->table, R);
      return make_report(name, r.bound, r.observed, r.pass,
                         {{"separated_pairs", r.separated_pairs}, {"crossing_pairs", r.crossing_pairs}});
    }
    std::vector<Orientation> pts;
    for (PointId s = 0; s < ws.point_count(); ++s) pts.push_back(principal_ultrafilter(ws, s));
    auto r = check_graded_hyperbolicity(l.model->graded, ws, pts, o.quadruple_cap, o.seed);
    return make_report(name, rational_json(r.bound), rational_json(r.delta), r.pass && r.wrg_pass,
                       {{"quadruple", r.worst_quadruple},
                        {"max_step", rational_json(r.max_step)},
                        {"step_bound", rational_json(r.step_bound)},
                        {"max_triangle_excess", rational_json(r.max_triangle_excess)}},
                       o.seed, {{"quadruples", r.quadruple_count}, {"exhaustive", r.exhaustive}, {"levels", r.distinct_levels}});
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown check \"" + name + "\"");
}

Json run_checks(const std::vector<std::string>& names, const Loaded& l, const Options& o, bool& all_pass) {
  for (const auto& n : names)
    if (std::find(kCheckNames.begin(), kCheckNames.end(), n) == kCheckNames.end())
      throw Error(ErrorCode::kInvalidArgument, "unknown check \"" + n + "\"");
  const auto d = build_dual(l, o);
  Json reports = Json::array();
  for (const auto& n : names) {
    auto r = run_check(n, l, d, o);
    all_pass = all_pass && r["pass"].get<bool>();
    reports.push_back(std::move(r));
  }
  return Json{{"system", descriptor_to_json(l.desc)}, {"dual_vertices", d.size()}, {"reports", std::move(reports)}};
}

// ---------------------------------------------------------------- curtains

Json curtain_report(const Loaded& l, const std::string& source) {
  const auto& g = *l.graph;
  const auto& model = *l.model;
  Json out;
  Json inv = Json::array();
  for (const auto& c : model.cw->curtains) inv.push_back(curtain_to_json(g, c));
  out["curtains"] = std::move(inv);
  out["walls"] = model.cw->walls->wall_count();
  out["contracting_geodesics"] = model.cw->contracting_geodesics;
  out["geodesics_examined"] = model.cw->geodesics_examined;
  out["truncated"] = model.cw->truncated;
  if (model.cw->curtains.empty()) out["note"] = "no strongly contracting geodesic of length 20D; curtain inventory is empty";
  Json th = Json::array();
  for (auto t : model.table->thresholds()) th.push_back(t);
  out["separation_radii"] = std::move(th);

  Json levels = Json::array();
  for (const auto& lv : model.graded.levels) {
    auto sep = check_crossing_bound(*model.cw, *model.table, static_cast<std::uint32_t>(lv.R));
    levels.push_back({{"R", lv.R},
                      {"L", lv.L},
                      {"m", lv.m},
                      {"kappa", rational_json(lv.kappa)},
                      {"lambda", rational_json(lv.lambda)},
                      {"separated_pairs", sep.separated_pairs},
                      {"longest_crossing_chain", sep.observed}});
  }
  out["levels"] = std::move(levels);
  out["Lambda"] = rational_json(model.graded.Lambda);
  out["tail_weight"] = rational_json(model.graded.tail_weight);

  const VertexId s = static_cast<VertexId>(point_by_label(*l.ws, source));
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (VertexId t = 0; t < g.size(); ++t) pairs.emplace_back(s, t);
  auto cmp = universal_comparison(g, model, pairs);
  Json rows = Json::array();
  for (const auto& r : cmp.rows)
    rows.push_back({{"source", g.labels()[r.s]},
                    {"target", g.labels()[r.t]},
                    {"graph_distance", r.graph_distance},
                    {"Dist", rational_json(r.graded)}});
  out["comparison"] = {{"rows", std::move(rows)},
                       {"max_Dist", rational_json(cmp.max_graded)},
                       {"lambda1", rational_json(cmp.lambda1)},
                       {"min_linear_margin", cmp.min_linear_margin ? rational_json(*cmp.min_linear_margin) : Json(nullptr)},
                       {"rough_slack", rational_json(cmp.rough_slack)}};
  return out;
}

// ------------------------------------------------------------------ report

// {"input": path, "input_kind": "wallspace"|"graph", "systems": [...],
//  "checks": [...], "caps": {...}, "seed": n, "L": n, "m": n, "output": path}
int run_config(const std::string& path, Options base) {
  Json cfg = parse_json(read_file(path));
  Options o = base;
  // Relative input paths are taken from the configuration's directory.
  std::filesystem::path in = detail::require(cfg, "input").get<std::string>();
  if (in.is_relative()) in = std::filesystem::path(path).parent_path() / in;
  o.input = in.string();
  o.graph = cfg.value("input_kind", std::string("wallspace")) == "graph";
  if (cfg.contains("seed")) o.seed = cfg["seed"].get<std::uint64_t>();
  if (cfg.contains("L")) o.L = cfg["L"].get<int>();
  if (cfg.contains("m")) o.m = cfg["m"].get<int>();
  if (cfg.contains("R_max")) o.R_max = cfg["R_max"].get<std::uint32_t>();
  if (cfg.contains("output")) o.output = cfg["output"].get<std::string>();
  if (cfg.contains("caps")) {
    const auto& c = cfg["caps"];
    auto positive = [](const Json& v, const char* what) {
      if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw Error(ErrorCode::kParse, std::string("cap \"") + what + "\" must be a positive integer");
      return v.get<std::uint64_t>();
    };
    if (c.contains("vertex")) o.vertex_cap = positive(c["vertex"], "vertex");
    if (c.contains("chain_length")) o.chain_cap = positive(c["chain_length"], "chain_length");
    if (c.contains("family")) o.family_cap = positive(c["family"], "family");
    if (c.contains("quadruple")) o.quadruple_cap = positive(c["quadruple"], "quadruple");
    if (c.contains("samples")) o.samples = positive(c["samples"], "samples");
  }
  std::vector<std::string> checks = cfg.value("checks", std::vector<std::string>{"median_axioms"});
  Json systems = cfg.value("systems", Json::array({Json{{"kind", "all_chains"}}}));
  bool all_pass = true;
  Json runs = Json::array();
  for (const auto& s : systems) {
    o.system = s.dump();
    runs.push_back(run_checks(checks, load(o), o, all_pass));
  }
  emit(o, Json{{"config", cfg}, {"seed", o.seed}, {"runs", std::move(runs)}, {"pass", all_pass}});
  return all_pass ? kExitPass : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual spaces of finite wallspaces"};
  app.require_subcommand(1);
  Options o;
  std::vector<std::string> checks;
  std::string from, to, source, config;
  bool graded = false;

  auto* build = app.add_subcommand("build", "enumerate the dual space and write it as JSON");
  add_input_options(build, o);

  auto* check = app.add_subcommand("check", "run named checks on the dual space");
  add_input_options(check, o);
  add_check_options(check, o);
  check->add_option("checks", checks, "check names")->required();

  auto* curt = app.add_subcommand("curtains", "curtain inventory, grading and comparison table for a graph");
  add_input_options(curt, o);
  curt->add_option("--source", source, "comparison source vertex label (default: first vertex)");

  auto* dist = app.add_subcommand("dist", "dist_C (or graded Dist) between two points");
  add_input_options(dist, o);
  dist->add_option("--from", from, "point label")->required();
  dist->add_option("--to", to, "point label")->required();
  dist->add_flag("--graded", graded, "graded Dist (graph input)");

  auto* path = app.add_subcommand("path", "normal wall path between two points");
  add_input_options(path, o);
  path->add_option("--from", from, "point label")->required();
  path->add_option("--to", to, "point label")->required();

  auto* report = app.add_subcommand("report", "run a JSON configuration");
  report->add_option("-c,--config", config, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*report) return run_config(config, o);
    if (*curt) o.graph = true;
    const Loaded l = load(o);
    if (*build) {
      emit(o, dual_to_json(build_dual(l, o)));
      return kExitPass;
    }
    if (*check) {
      bool all_pass = true;
      Json out = run_checks(checks, l, o, all_pass);
      out["pass"] = all_pass;
      emit(o, out);
      return all_pass ? kExitPass : kExitViolated;
    }
    if (*curt) {
      if (source.empty()) source = l.graph->labels().front();
      emit(o, curtain_report(l, source));
      return kExitPass;
    }
    const PointId a = point_by_label(*l.ws, from), b = point_by_label(*l.ws, to);
    const auto xa = principal_ultrafilter(*l.ws, a), xb = principal_ultrafilter(*l.ws, b);
    if (*dist) {
      Json out{{"from", from}, {"to", to}, {"system", descriptor_to_json(l.desc)}};
      if (graded) {
        if (!l.model) throw Error(ErrorCode::kInvalidArgument, "--graded needs --graph input");
        out["Dist"] = rational_json(graded_dist(l.model->graded, *l.ws, xa, xb));
        out["levels"] = level_dists(l.model->graded, *l.ws, xa, xb);
      } else {
        out["dist"] = dist_C(l.cs, *l.ws, xa, xb);
      }
      emit(o, out);
      return kExitPass;
    }
    if (*path) {
      const auto d = build_dual(l, o);
      auto p = normal_wall_path(d, xa, xb);
      Json steps = Json::array();
      for (const auto& s : p.steps) steps.push_back(s.str());
      emit(o, Json{{"from", from}, {"to", to}, {"length", p.length()}, {"steps", std::move(steps)},
                   {"system", descriptor_to_json(l.desc)}});
      return kExitPass;
    }
  } catch (const Error& e) {
    std::cerr << "walldual: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "walldual: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
