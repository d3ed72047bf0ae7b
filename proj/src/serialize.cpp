#include "rpe/serialize.hpp"

#include <fstream>

#include "rpe/environment_io.hpp"

namespace rpe {

using nlohmann::json;

json jpc_to_json(const Jpc& jpc) {
  json out = json::array();
  for (const Point& p : jpc.positions) out.push_back(point_to_json(p));
  return out;
}

Jpc jpc_from_json(const json& j) {
  if (!j.is_array()) throw InputError("a configuration must be an array of [x, y] positions");
  Jpc jpc;
  for (const json& p : j) jpc.positions.push_back(point_from_json(p));
  return jpc;
}

json waypoints_to_json(const Solution& solution) {
  json out = json::array();
  for (const Jpc& w : solution.waypoints) out.push_back(jpc_to_json(w));
  return out;
}

json stats_to_json(const PlanStats& s) {
  return json{{"elapsed_s", s.elapsed_s},
              {"validation_s", s.validation_s},
              {"vertices", s.vertices},
              {"edges", s.edges},
              {"labels_stored", s.labels_stored},
              {"labels_created", s.labels_created},
              {"labels_pruned", s.labels_pruned},
              {"relations_computed", s.relations_computed},
              {"label_propagations", s.label_propagations},
              {"skipped_edges", s.skipped_edges},
              {"samples", s.samples},
              {"webs", s.webs}};
}

json check_to_json(const CheckReport& report) {
  json verdicts = json::array();
  for (const ExclusionVerdict& v : report.verdicts) {
    verdicts.push_back(json{{"excluded", v.excluded ? json(*v.excluded) : json(nullptr)},
                            {"passed", v.passed},
                            {"residual_cells", v.residual_cells}});
  }
  return json{{"passed", report.passed()}, {"free_cells", report.free_cells}, {"verdicts", verdicts}};
}

json config_to_json(const PlanConfig& c) {
  json out{{"n", c.n},
           {"sampler", to_string(c.sampler)},
           {"seed", c.seed},
           {"timeout_s", c.timeout_s},
           {"caching", c.caching},
           {"coverage_grid", c.coverage_grid}};
  if (c.root) out["root"] = jpc_to_json(*c.root);
  return out;
}

json plan_to_json(const PlanResult& result, const PlanConfig& config) {
  json out{{"outcome", to_string(result.outcome)},
           {"config", config_to_json(config)},
           {"waypoints", result.solution ? waypoints_to_json(*result.solution) : json::array()},
           {"stats", stats_to_json(result.stats)}};
  if (result.check) out["check"] = check_to_json(*result.check);
  return out;
}

Solution solution_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("waypoints")) throw InputError("solution needs a \"waypoints\" array");
  const json& w = doc["waypoints"];
  if (!w.is_array() || w.empty()) throw InputError("\"waypoints\" must be a non-empty array");
  Solution s;
  for (const json& j : w) s.waypoints.push_back(jpc_from_json(j));
  for (const Jpc& jpc : s.waypoints) {
    if (jpc.size() != s.waypoints.front().size() || jpc.size() == 0) {
      throw InputError("every waypoint must list the same, non-zero number of positions");
    }
  }
  return s;
}

Solution load_solution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open solution file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return solution_from_json(doc);
}

json graph_to_json(const Rspeg& graph) {
  json vertices = json::array();
  for (std::size_t v = 0; v < graph.vertices().size(); ++v) {
    const Vertex& vx = graph.vertices()[v];
    json shadows = json::array();
    for (const ShadowSet& s : vx.leave_one_out) shadows.push_back(s.size());
    vertices.push_back(json{{"id", v}, {"jpc", jpc_to_json(vx.jpc)}, {"shadow_counts", shadows},
                            {"labels", vx.labels}});
  }
  json edges = json::array();
  for (const GraphEdge& e : graph.edges()) edges.push_back(json::array({e.from, e.to}));
  json labels = json::array();
  for (std::size_t l = 0; l < graph.labels().size(); ++l) {
    const LabelRecord& r = graph.labels()[l];
    json pred = r.pred ? json{{"vertex", r.pred->vertex}, {"label", r.pred->label}} : json(nullptr);
    labels.push_back(json{{"id", l}, {"vertex", r.vertex}, {"label", r.label.str()}, {"alive", r.alive},
                          {"pred", pred}});
  }
  return json{{"n", graph.n()},
              {"caching", graph.options().cache_relations},
              {"vertices", vertices},
              {"edges", edges},
              {"labels", labels}};
}

json web_to_json(const Web& web, const VisibilityGraph& graph, const std::vector<std::size_t>& walk, std::size_t n) {
  json guards = json::array(), connectors = json::array(), edges = json::array();
  for (const Point& p : web.guards) guards.push_back(point_to_json(p));
  for (const Point& p : web.connectors) connectors.push_back(point_to_json(p));
  for (std::size_t a = 0; a < graph.size(); ++a) {
    for (std::size_t b : graph.adjacency[a]) {
      if (a < b) edges.push_back(json::array({a, b}));
    }
  }
  json out{{"guards", guards}, {"connectors", connectors}, {"edges", edges}, {"walk", walk}, {"d", walk.size()}};
  if (n >= 2 && !walk.empty()) {
    const std::vector<Point> pts = web.points();
    const std::size_t d = walk.size();
    json samples = json::array();
    for (std::size_t k = 0; k < rcs_sample_count(d, n); ++k) {
      Jpc jpc;
      for (std::size_t i = 0; i < n; ++i) jpc.positions.push_back(pts[walk[rcs_index(d, n, i, k)]]);
      samples.push_back(jpc_to_json(jpc));
    }
    out["n"] = n;
    out["spacing"] = rcs_spacing(d, n);
    out["rcs_samples"] = samples;
  }
  return out;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace rpe
