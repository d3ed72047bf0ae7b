#pragma once

#include <filesystem>
#include <vector>

#include "json.hpp"
#include "rpe/checker.hpp"
#include "rpe/planner.hpp"
#include "rpe/rspeg.hpp"
#include "rpe/sampling.hpp"

namespace rpe {

nlohmann::json jpc_to_json(const Jpc& jpc);
Jpc jpc_from_json(const nlohmann::json& j);

/// Array of waypoints, each an array of [x, y] positions.
nlohmann::json waypoints_to_json(const Solution& solution);

nlohmann::json stats_to_json(const PlanStats& stats);
nlohmann::json check_to_json(const CheckReport& report);
nlohmann::json config_to_json(const PlanConfig& config);

/// The solution file: outcome, config, waypoints, stats and check report.
nlohmann::json plan_to_json(const PlanResult& result, const PlanConfig& config);

/// Reads the waypoints of a solution file. Throws InputError.
Solution solution_from_json(const nlohmann::json& doc);
Solution load_solution(const std::filesystem::path& path);

/// Vertices with their configurations and live labels, edges, and label provenance.
nlohmann::json graph_to_json(const Rspeg& graph);

/// Web points, visibility edges, walk and the first RCS samples for `n` robots.
nlohmann::json web_to_json(const Web& web, const VisibilityGraph& graph, const std::vector<std::size_t>& walk,
                           std::size_t n);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace rpe
