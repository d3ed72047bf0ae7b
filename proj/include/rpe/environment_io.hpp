#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rpe/geometry.hpp"

namespace rpe {

/// Unreadable or malformed input files (as opposed to invalid geometry).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `{"outer": [[x,y],...], "holes": [[[x,y],...],...], "epsilon": optional}`
RawEnvironment parse_environment(const nlohmann::json& doc);

/// Reads and validates an environment file. Throws InputError or GeometryError.
Environment load_environment(const std::filesystem::path& path);

nlohmann::json environment_to_json(const Environment& env);

nlohmann::json point_to_json(Point p);
Point point_from_json(const nlohmann::json& j);

}  // namespace rpe
