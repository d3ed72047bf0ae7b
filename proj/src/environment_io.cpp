#include "rpe/environment_io.hpp"

#include <fstream>

namespace rpe {

namespace {

Ring ring_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array of [x, y] pairs");
  Ring ring;
  ring.reserve(j.size());
  for (const auto& p : j) ring.push_back(point_from_json(p));
  return ring;
}

nlohmann::json ring_to_json(const Ring& ring) {
  auto out = nlohmann::json::array();
  for (const Point& p : ring) out.push_back(point_to_json(p));
  return out;
}

}  // namespace

nlohmann::json point_to_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

Point point_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("expected a point [x, y], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

RawEnvironment parse_environment(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("outer")) throw InputError("environment needs an \"outer\" ring");
  RawEnvironment raw;
  raw.outer = ring_from_json(doc["outer"], "outer");
  if (doc.contains("holes")) {
    if (!doc["holes"].is_array()) throw InputError("\"holes\" must be an array of rings");
    for (std::size_t h = 0; h < doc["holes"].size(); ++h) {
      raw.holes.push_back(ring_from_json(doc["holes"][h], "hole " + std::to_string(h)));
    }
  }
  if (doc.contains("epsilon") && !doc["epsilon"].is_null()) {
    if (!doc["epsilon"].is_number()) throw InputError("\"epsilon\" must be a number");
    raw.epsilon = doc["epsilon"].get<double>();
  }
  return raw;
}

Environment load_environment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open environment file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return Environment::validate(parse_environment(doc));
}

nlohmann::json environment_to_json(const Environment& env) {
  nlohmann::json doc;
  doc["outer"] = ring_to_json(env.outer());
  doc["holes"] = nlohmann::json::array();
  for (const Ring& h : env.holes()) doc["holes"].push_back(ring_to_json(h));
  doc["epsilon"] = env.epsilon();
  return doc;
}

}  // namespace rpe
